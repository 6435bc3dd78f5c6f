#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "accent/compatibility.hpp"
#include "accent/data_io.hpp"
#include "accent/endpoint.hpp"
#include "accent/eval.hpp"
#include "accent/pipeline.hpp"
#include "accent/version.hpp"

namespace py = pybind11;
using namespace accent;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Event commonsense scoring for open-domain dialogue responses";
  m.attr("__version__") = ACCENT_VERSION;

  py::register_exception<Error>(m, "AccentError");

  // --- core types -----------------------------------------------------
  py::enum_<Relation>(m, "Relation")
      .value("xIntent", Relation::xIntent)
      .value("xWant", Relation::xWant)
      .value("oWant", Relation::oWant)
      .value("xReact", Relation::xReact)
      .value("oReact", Relation::oReact)
      .value("xNeed", Relation::xNeed)
      .value("xAttr", Relation::xAttr)
      .value("xEffect", Relation::xEffect)
      .value("oEffect", Relation::oEffect)
      .value("HinderedBy", Relation::HinderedBy)
      .value("IsAfter", Relation::IsAfter)
      .value("HasSubEvent", Relation::HasSubEvent);

  py::enum_<Locality>(m, "Locality")
      .value("Single", Locality::Single)
      .value("Pair", Locality::Pair)
      .value("External", Locality::External);

  py::class_<Utterance>(m, "Utterance")
      .def(py::init<std::string, std::string>(), py::arg("speaker") = "",
           py::arg("text") = "")
      .def_readwrite("speaker", &Utterance::speaker)
      .def_readwrite("text", &Utterance::text);

  py::class_<Dialogue>(m, "Dialogue")
      .def(py::init<>())
      .def_readwrite("id", &Dialogue::id)
      .def_readwrite("history", &Dialogue::history)
      .def_readwrite("response", &Dialogue::response)
      .def_readwrite("system", &Dialogue::system)
      .def_readwrite("source", &Dialogue::source);

  py::class_<Event>(m, "Event")
      .def(py::init<std::string>(), py::arg("text") = "")
      .def_readwrite("text", &Event::text)
      .def("__repr__",
           [](const Event& e) { return "Event(" + e.text + ")"; });

  py::class_<EventRelationTuple>(m, "EventRelationTuple")
      .def(py::init<>())
      .def_readwrite("head", &EventRelationTuple::head)
      .def_readwrite("relation", &EventRelationTuple::relation)
      .def_readwrite("tail", &EventRelationTuple::tail)
      .def_readwrite("locality", &EventRelationTuple::locality);

  py::class_<ScoredTuple>(m, "ScoredTuple")
      .def_readonly("tuple", &ScoredTuple::tuple)
      .def_readonly("score", &ScoredTuple::score)
      .def_readonly("best_generated_tail", &ScoredTuple::best_generated_tail)
      .def_readonly("candidate_tails", &ScoredTuple::candidate_tails);

  py::class_<ScoredResponse>(m, "ScoredResponse")
      .def_readonly("dialogue_id", &ScoredResponse::dialogue_id)
      .def_readonly("score", &ScoredResponse::score)
      .def_readonly("tuples", &ScoredResponse::tuples)
      .def_readonly("used_fallback", &ScoredResponse::used_fallback);

  m.def("relation_name", [](Relation r) { return to_string(r); });
  m.def("parse_relation", &parse_relation);
  m.def(
      "default_relation_specs",
      [] {
        std::vector<std::tuple<Relation, std::string, std::string>> specs;
        for (const RelationSpec& spec : default_relation_specs()) {
          specs.emplace_back(spec.relation, spec.prompt, spec.query_phrase);
        }
        return specs;
      },
      "All 12 (relation, prompt, query_phrase) triples in fixed order");
  m.def(
      "normalize_event",
      [](const std::string& raw) { return normalize_event(raw).text; },
      py::arg("raw"));
  m.def(
      "truncate_history",
      [](const std::vector<Utterance>& history, int max_history) {
        return truncate_history(history, max_history);
      },
      py::arg("history"), py::arg("max_history") = 4);

  // --- backends ---------------------------------------------------------
  py::class_<GenerationBackend>(m, "GenerationBackend");
  py::class_<EmbeddingBackend>(m, "EmbeddingBackend");

  py::class_<ScriptedGenerator, GenerationBackend>(m, "ScriptedGenerator")
      .def(py::init([](bool strict, std::vector<std::string> fallback) {
             return std::make_unique<ScriptedGenerator>(
                 strict ? ScriptedGenerator::Mode::Strict
                        : ScriptedGenerator::Mode::Permissive,
                 std::move(fallback));
           }),
           py::arg("strict") = false,
           py::arg("fallback") = std::vector<std::string>{"None"})
      .def("script",
           [](ScriptedGenerator& self, const std::string& input,
              std::vector<std::string> sequences) {
             self.script(input, std::move(sequences));
           })
      .def("call_count", &ScriptedGenerator::call_count)
      .def("call_inputs", [](const ScriptedGenerator& self) {
        std::vector<std::string> inputs;
        for (const GenerationRequest& request : self.call_log()) {
          inputs.push_back(request.input_text);
        }
        return inputs;
      });

  py::class_<HashEmbedder, EmbeddingBackend>(m, "HashEmbedder")
      .def(py::init<std::size_t>(), py::arg("dim") = 64)
      .def("embed", [](HashEmbedder& self, const std::string& text) {
        return self.embed(text).values;
      });

  py::class_<EndpointGenerator, GenerationBackend>(m, "EndpointGenerator")
      .def(py::init<std::string, std::string, int>(), py::arg("base_url"),
           py::arg("path") = "/generate", py::arg("timeout_seconds") = 60);

  py::class_<EndpointEmbedder, EmbeddingBackend>(m, "EndpointEmbedder")
      .def(py::init<std::string, std::string, int>(), py::arg("base_url"),
           py::arg("path") = "/embed", py::arg("timeout_seconds") = 60);

  m.def("cosine", [](const std::vector<double>& a, const std::vector<double>& b) {
    return cosine(EmbeddingVector{a}, EmbeddingVector{b});
  });

  // --- extraction and compatibility --------------------------------------
  py::class_<ExtractionConfig>(m, "ExtractionConfig")
      .def(py::init<>())
      .def_readwrite("max_history", &ExtractionConfig::max_history)
      .def_readwrite("max_output_tokens", &ExtractionConfig::max_output_tokens)
      .def_readwrite("locality_threshold",
                     &ExtractionConfig::locality_threshold);

  m.def(
      "build_extraction_input",
      [](const Dialogue& dialogue, Relation relation,
         const ExtractionConfig& config) {
        return build_extraction_input(dialogue,
                                      default_relation_spec(relation), config);
      },
      py::arg("dialogue"), py::arg("relation"),
      py::arg("config") = ExtractionConfig{});
  m.def("parse_extraction_output",
        [](const std::string& raw) -> py::object {
          const ParsedExtraction parsed = parse_extraction_output(raw);
          switch (parsed.kind) {
            case ParsedExtraction::Kind::Tuple:
              return py::make_tuple(parsed.head, parsed.tail);
            case ParsedExtraction::Kind::None:
              return py::none();
            case ParsedExtraction::Kind::Malformed:
              return py::str("malformed");
          }
          return py::none();
        },
        "Returns (head, tail), None for a 'None' answer, or 'malformed'");
  m.def("render_extraction_output", &render_extraction_output);
  m.def(
      "extract_tuples",
      [](const Dialogue& dialogue, GenerationBackend& generator,
         const ExtractionConfig& config) {
        return extract_tuples(dialogue, generator, config);
      },
      py::arg("dialogue"), py::arg("generator"),
      py::arg("config") = ExtractionConfig{});
  m.def(
      "classify_locality",
      [](const EventRelationTuple& tuple, const Dialogue& dialogue,
         double threshold) {
        return classify_locality(tuple, dialogue, threshold);
      },
      py::arg("tuple"), py::arg("dialogue"), py::arg("threshold") = 0.5);

  py::class_<CompatibilityConfig>(m, "CompatibilityConfig")
      .def(py::init<>())
      .def_readwrite("beam_size", &CompatibilityConfig::beam_size)
      .def_readwrite("clamp_floor", &CompatibilityConfig::clamp_floor)
      .def_readwrite("query_template", &CompatibilityConfig::query_template);

  m.def(
      "build_cskb_query",
      [](const std::string& head, Relation relation,
         const CompatibilityConfig& config) {
        return build_cskb_query(Event{head}, relation, config);
      },
      py::arg("head"), py::arg("relation"),
      py::arg("config") = CompatibilityConfig{});
  m.def(
      "compatibility_score",
      [](const std::string& tail, const std::vector<std::string>& candidates,
         EmbeddingBackend& embedder, const CompatibilityConfig& config) {
        const TupleScore score =
            compatibility_score(Event{tail}, candidates, embedder, config);
        return py::make_tuple(score.value, score.best_index);
      },
      py::arg("tail"), py::arg("candidate_tails"), py::arg("embedder"),
      py::arg("config") = CompatibilityConfig{},
      "Returns (score, best_candidate_index)");
  m.def("neural_loss_score", &neural_loss_score);

  // --- pipeline -----------------------------------------------------------
  py::enum_<LocalityPolicy>(m, "LocalityPolicy")
      .value("ScoreAll", LocalityPolicy::ScoreAll)
      .value("SingleOnly", LocalityPolicy::SingleOnly)
      .value("PairOnly", LocalityPolicy::PairOnly);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("extraction", &PipelineConfig::extraction)
      .def_readwrite("compatibility", &PipelineConfig::compatibility)
      .def_readwrite("fallback_score", &PipelineConfig::fallback_score)
      .def_readwrite("locality_policy", &PipelineConfig::locality_policy);

  m.def(
      "score_response",
      [](const Dialogue& dialogue, GenerationBackend& extractor,
         GenerationBackend& cskb, EmbeddingBackend& embedder,
         const PipelineConfig& config) {
        return score_response(dialogue, extractor, cskb, embedder, config);
      },
      py::arg("dialogue"), py::arg("extractor"), py::arg("cskb"),
      py::arg("embedder"), py::arg("config") = PipelineConfig{});
  m.def(
      "score_corpus",
      [](const std::vector<Dialogue>& dialogues, GenerationBackend& extractor,
         GenerationBackend& cskb, EmbeddingBackend& embedder,
         const PipelineConfig& config, int parallelism) {
        const CorpusResult result = score_corpus(
            dialogues, extractor, cskb, embedder, config, parallelism);
        std::vector<py::object> entries;
        for (const CorpusEntry& entry : result.entries) {
          if (entry.ok()) {
            entries.push_back(py::cast(*entry.response));
          } else {
            entries.push_back(py::str(entry.error));
          }
        }
        return py::make_tuple(entries, result.failure_count);
      },
      py::arg("dialogues"), py::arg("extractor"), py::arg("cskb"),
      py::arg("embedder"), py::arg("config") = PipelineConfig{},
      py::arg("parallelism") = 1,
      "Returns (entries, failure_count); failed entries are error strings");

  // --- evaluation harness ---------------------------------------------
  m.def("pearson", &eval::pearson);
  m.def("spearman", &eval::spearman);
  m.def("iaa", &eval::iaa);
  m.def("bleu2", &eval::bleu2);
  m.def("roc_auc", &eval::roc_auc);
  m.def("tuple_to_text", &eval::tuple_to_text);
  m.def(
      "extraction_f1",
      [](const std::vector<std::vector<EventRelationTuple>>& predicted,
         const std::vector<std::vector<EventRelationTuple>>& gold) {
        const eval::PrecisionRecallF1 result =
            eval::extraction_f1(predicted, gold);
        return py::make_tuple(result.precision, result.recall, result.f1);
      },
      "Returns (precision, recall, f1)");
  m.def("system_ranking",
        [](const std::vector<std::pair<std::string, double>>& tagged) {
          std::vector<std::pair<std::string, ScoredResponse>> responses;
          for (const auto& [system, score] : tagged) {
            ScoredResponse response;
            response.score = score;
            responses.emplace_back(system, response);
          }
          return eval::system_ranking(responses);
        });

  // --- data io ------------------------------------------------------------
  m.def("load_dialogues", [](const std::string& path) {
    return io::load_dialogues(path);
  });
  m.def(
      "filter_corpus",
      [](const std::vector<Dialogue>& dialogues, int min_response_words,
         bool require_non_interrogative, int max_history) {
        io::CorpusFilterConfig config;
        config.min_response_words = min_response_words;
        config.require_non_interrogative = require_non_interrogative;
        config.max_history = max_history;
        const io::FilterResult result = io::filter_corpus(dialogues, config);
        std::vector<std::pair<Dialogue, std::string>> rejected;
        for (const io::RejectedDialogue& r : result.rejected) {
          rejected.emplace_back(r.dialogue, io::to_string(r.reason));
        }
        return py::make_tuple(result.kept, rejected);
      },
      py::arg("dialogues"), py::arg("min_response_words") = 5,
      py::arg("require_non_interrogative") = true, py::arg("max_history") = 4,
      "Returns (kept, [(dialogue, reason), ...])");
}

#include "accent/endpoint.hpp"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

namespace accent {

using nlohmann::json;

namespace {

json post_json(const std::string& base_url, const std::string& path,
               const json& body, int timeout_seconds) {
  httplib::Client client(base_url);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);

  const httplib::Result result =
      client.Post(path, body.dump(), "application/json");
  if (!result) {
    throw BackendError("endpoint " + base_url + path + " unreachable: " +
                       httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw BackendError("endpoint " + base_url + path + " returned status " +
                       std::to_string(result->status));
  }
  try {
    return json::parse(result->body);
  } catch (const json::exception& e) {
    throw BackendError("endpoint " + base_url + path +
                       " returned invalid JSON: " + e.what());
  }
}

}  // namespace

EndpointGenerator::EndpointGenerator(std::string base_url, std::string path,
                                     int timeout_seconds)
    : base_url_(std::move(base_url)),
      path_(std::move(path)),
      timeout_seconds_(timeout_seconds) {}

GenerationResult EndpointGenerator::generate(const GenerationRequest& request) {
  validate_request(request);
  const json body = {{"input", request.input_text},
                     {"k", request.num_return_sequences},
                     {"max_tokens", request.max_output_tokens}};
  const json reply = post_json(base_url_, path_, body, timeout_seconds_);

  if (!reply.contains("sequences") || !reply["sequences"].is_array()) {
    throw BackendError("generation endpoint reply lacks \"sequences\"");
  }
  GenerationResult result;
  for (const json& sequence : reply["sequences"]) {
    if (!sequence.is_string()) {
      throw BackendError("generation endpoint sequences must be strings");
    }
    result.sequences.push_back(sequence.get<std::string>());
  }
  if (reply.contains("losses") && reply["losses"].is_array()) {
    std::vector<double> losses;
    for (const json& loss : reply["losses"]) {
      if (!loss.is_number()) {
        throw BackendError("generation endpoint losses must be numbers");
      }
      losses.push_back(loss.get<double>());
    }
    if (losses.size() != result.sequences.size()) {
      throw BackendError("generation endpoint losses misaligned with sequences");
    }
    result.per_sequence_loss = std::move(losses);
  }
  // an over-eager server may ignore k; enforce the contract here
  const std::size_t k = static_cast<std::size_t>(request.num_return_sequences);
  if (result.sequences.size() > k) {
    result.sequences.resize(k);
    if (result.per_sequence_loss) result.per_sequence_loss->resize(k);
  }
  return result;
}

EndpointEmbedder::EndpointEmbedder(std::string base_url, std::string path,
                                   int timeout_seconds)
    : base_url_(std::move(base_url)),
      path_(std::move(path)),
      timeout_seconds_(timeout_seconds) {}

EmbeddingVector EndpointEmbedder::embed(const std::string& text) {
  if (collapse_whitespace(text).empty()) {
    throw ContractViolation("embed: empty text");
  }
  const json reply =
      post_json(base_url_, path_, json{{"input", text}}, timeout_seconds_);
  if (!reply.contains("vector") || !reply["vector"].is_array() ||
      reply["vector"].empty()) {
    throw BackendError("embedding endpoint reply lacks a non-empty \"vector\"");
  }
  EmbeddingVector vector;
  for (const json& value : reply["vector"]) {
    if (!value.is_number()) {
      throw BackendError("embedding endpoint vector entries must be numbers");
    }
    const double v = value.get<double>();
    if (!std::isfinite(v)) {
      throw BackendError("embedding endpoint returned a non-finite entry");
    }
    vector.values.push_back(v);
  }

  std::lock_guard<std::mutex> lock(mutex_);
  if (dimension_ == 0) {
    dimension_ = vector.values.size();
  } else if (dimension_ != vector.values.size()) {
    throw BackendError("embedding endpoint changed dimension from " +
                       std::to_string(dimension_) + " to " +
                       std::to_string(vector.values.size()));
  }
  return vector;
}

std::size_t EndpointEmbedder::dimension() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return dimension_;
}

}  // namespace accent

#pragma once

#define ACCENT_VERSION "0.1.0"

#pragma once

#define GRAPHBLOW_VERSION_MAJOR 0
#define GRAPHBLOW_VERSION_MINOR 1
#define GRAPHBLOW_VERSION_PATCH 0
#define GRAPHBLOW_VERSION "0.1.0"

namespace graphblow {
inline const char* version() { return GRAPHBLOW_VERSION; }
}

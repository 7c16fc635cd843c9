#pragma once

#define ARGSWAP_VERSION "0.1.0"
#define ARGSWAP_TOOL_NAME "argswap"
#define ARGSWAP_INFO_URI "https://example.org/argswap"

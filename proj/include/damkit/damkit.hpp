#pragma once

// Everything: graph core, hierarchy, portals, canonical pairs, detours,
// proxies, the builders, verification, and file formats.

#include "damkit/cli.hpp"
#include "damkit/dam.hpp"
#include "damkit/generators.hpp"
#include "damkit/io.hpp"
#include "damkit/verify.hpp"

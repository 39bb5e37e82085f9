#pragma once

// Umbrella header for the whole library.

#include "asymcp/bounds.hpp"
#include "asymcp/coupling.hpp"
#include "asymcp/dynamics.hpp"
#include "asymcp/event_stream.hpp"
#include "asymcp/io.hpp"
#include "asymcp/lattice.hpp"
#include "asymcp/meanfield.hpp"
#include "asymcp/params.hpp"
#include "asymcp/rate_tree.hpp"
#include "asymcp/rng.hpp"
#include "asymcp/stats.hpp"
#include "asymcp/survival.hpp"

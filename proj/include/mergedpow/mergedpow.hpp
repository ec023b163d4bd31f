#pragma once

#include "mergedpow/arrivals.hpp"
#include "mergedpow/bounds.hpp"
#include "mergedpow/chainsim.hpp"
#include "mergedpow/economics.hpp"
#include "mergedpow/model.hpp"
#include "mergedpow/numfmt.hpp"
#include "mergedpow/oracles.hpp"
#include "mergedpow/rng.hpp"
#include "mergedpow/security.hpp"
#include "mergedpow/table.hpp"

#pragma once

// Umbrella header.

#include "curvepow/codec.hpp"
#include "curvepow/config.hpp"
#include "curvepow/chain.hpp"
#include "curvepow/curve.hpp"
#include "curvepow/dlp.hpp"
#include "curvepow/errors.hpp"
#include "curvepow/field.hpp"
#include "curvepow/paramgen.hpp"
#include "curvepow/primes.hpp"
#include "curvepow/sha3.hpp"
#include "curvepow/sim.hpp"

#pragma once

#include "twinrank/core/digest.hpp"
#include "twinrank/core/encoding.hpp"
#include "twinrank/core/errors.hpp"
#include "twinrank/core/rng.hpp"
#include "twinrank/core/state.hpp"
#include "twinrank/core/types.hpp"

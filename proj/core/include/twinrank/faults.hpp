#pragma once

#include "twinrank/faults/catalog.hpp"
#include "twinrank/faults/conformance.hpp"
#include "twinrank/faults/fault_spec.hpp"
#include "twinrank/faults/injector.hpp"
#include "twinrank/faults/predict.hpp"

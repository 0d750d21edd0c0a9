#pragma once

#include "twinrank/runtime/engine.hpp"
#include "twinrank/runtime/events.hpp"
#include "twinrank/runtime/mailbox.hpp"
#include "twinrank/runtime/program.hpp"
#include "twinrank/runtime/replica.hpp"

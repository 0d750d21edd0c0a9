#pragma once

#include "twinrank/checkpoint/app_level.hpp"
#include "twinrank/checkpoint/drivers.hpp"
#include "twinrank/checkpoint/image.hpp"
#include "twinrank/checkpoint/run_directory.hpp"
#include "twinrank/checkpoint/system_level.hpp"

#pragma once

#include "twinrank/apps/app_config.hpp"
#include "twinrank/apps/jacobi.hpp"
#include "twinrank/apps/matmul.hpp"
#include "twinrank/apps/smith_waterman.hpp"

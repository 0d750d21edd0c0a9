#pragma once

#include "twinrank/costmodel/model.hpp"
#include "twinrank/costmodel/params.hpp"
#include "twinrank/costmodel/tables.hpp"

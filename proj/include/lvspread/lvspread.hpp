#pragma once

#include "lvspread/config.hpp"
#include "lvspread/csv.hpp"
#include "lvspread/error.hpp"
#include "lvspread/experiment.hpp"
#include "lvspread/grid.hpp"
#include "lvspread/hj.hpp"
#include "lvspread/rd_sim.hpp"
#include "lvspread/speeds.hpp"
#include "lvspread/svg.hpp"

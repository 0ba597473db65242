#pragma once

#include "gofsim/adjust.hpp"
#include "gofsim/alternatives.hpp"
#include "gofsim/chisquare.hpp"
#include "gofsim/error.hpp"
#include "gofsim/histogram.hpp"
#include "gofsim/model.hpp"
#include "gofsim/rng.hpp"
#include "gofsim/statistics.hpp"
#include "gofsim/studies.hpp"

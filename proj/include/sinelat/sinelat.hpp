#pragma once

#include "sinelat/correlation.hpp"
#include "sinelat/ergodic.hpp"
#include "sinelat/errors.hpp"
#include "sinelat/form_factor.hpp"
#include "sinelat/gap_stats.hpp"
#include "sinelat/io.hpp"
#include "sinelat/kernel.hpp"
#include "sinelat/quadrature.hpp"
#include "sinelat/rng.hpp"
#include "sinelat/sampling.hpp"
#include "sinelat/sinc.hpp"
#include "sinelat/test_functions.hpp"
#include "sinelat/version.hpp"

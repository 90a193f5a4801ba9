#pragma once

#include "riskbound/concentration.hpp"
#include "riskbound/coverage.hpp"
#include "riskbound/distributions.hpp"
#include "riskbound/estimators.hpp"
#include "riskbound/math.hpp"
#include "riskbound/pac_bayes.hpp"
#include "riskbound/record.hpp"
#include "riskbound/rng.hpp"
#include "riskbound/samples.hpp"
#include "riskbound/threshold_task.hpp"

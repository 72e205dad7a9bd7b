#pragma once

#include "hmeasure/auc.hpp"
#include "hmeasure/config.hpp"
#include "hmeasure/distributions.hpp"
#include "hmeasure/empirical.hpp"
#include "hmeasure/errors.hpp"
#include "hmeasure/h_measure.hpp"
#include "hmeasure/loss.hpp"
#include "hmeasure/random.hpp"
#include "hmeasure/scoring_rules.hpp"
#include "hmeasure/threshold_choice.hpp"
#include "hmeasure/version.hpp"

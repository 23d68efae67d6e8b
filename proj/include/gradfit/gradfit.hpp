#pragma once

#include "gradfit/chain.hpp"
#include "gradfit/csvio.hpp"
#include "gradfit/estimator.hpp"
#include "gradfit/experiments.hpp"
#include "gradfit/fisher.hpp"
#include "gradfit/measurement.hpp"
#include "gradfit/optim.hpp"
#include "gradfit/verification.hpp"

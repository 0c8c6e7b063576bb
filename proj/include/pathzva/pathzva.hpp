#pragma once

#include "pathzva/epsilon_order.hpp"
#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"
#include "pathzva/state_indexer.hpp"
#include "pathzva/state_space.hpp"
#include "pathzva/exit_distribution.hpp"
#include "pathzva/forward_phase.hpp"
#include "pathzva/backward_phase.hpp"
#include "pathzva/preprocess.hpp"
#include "pathzva/sampling/rng.hpp"
#include "pathzva/sampling/statistics.hpp"
#include "pathzva/sampling/change_of_measure.hpp"
#include "pathzva/sampling/path_sampler.hpp"
#include "pathzva/sampling/parallel.hpp"
#include "pathzva/sampling/estimator.hpp"
#include "pathzva/sampling/unavailability.hpp"
#include "pathzva/sampling/exact.hpp"
#include "pathzva/zoo/fig1.hpp"
#include "pathzva/zoo/multicomponent.hpp"
#include "pathzva/zoo/two_type.hpp"
#include "pathzva/zoo/dds.hpp"
#include "pathzva/zoo/registry.hpp"

#pragma once

#include "chaoslyap/core.hpp"
#include "chaoslyap/random.hpp"
#include "chaoslyap/signal.hpp"
#include "chaoslyap/neuralnet.hpp"
#include "chaoslyap/lyapunov.hpp"
#include "chaoslyap/fitter.hpp"
#include "chaoslyap/selection.hpp"
#include "chaoslyap/generators.hpp"
#include "chaoslyap/io.hpp"
#include "chaoslyap/app.hpp"

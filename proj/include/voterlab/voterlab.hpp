#ifndef VOTERLAB_VOTERLAB_HPP
#define VOTERLAB_VOTERLAB_HPP

#include "classes.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "geometry.hpp"
#include "interface.hpp"
#include "oracle.hpp"
#include "records.hpp"
#include "render.hpp"
#include "rng.hpp"
#include "stats.hpp"

#endif  // VOTERLAB_VOTERLAB_HPP

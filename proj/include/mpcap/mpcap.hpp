#pragma once

#include "bounds.hpp"
#include "channel.hpp"
#include "classifier.hpp"
#include "config.hpp"
#include "decay_profile.hpp"
#include "errors.hpp"
#include "mi_oracle.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "signaling.hpp"
#include "sweep.hpp"

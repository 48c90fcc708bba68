#pragma once

#include "mixkit/version.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/rng.hpp"
#include "mixkit/numeric.hpp"
#include "mixkit/generators.hpp"
#include "mixkit/distributions.hpp"
#include "mixkit/mixability.hpp"
#include "mixkit/couplings.hpp"
#include "mixkit/rearrange.hpp"
#include "mixkit/verify.hpp"
#include "mixkit/scenario.hpp"

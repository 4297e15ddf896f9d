#ifndef FBPAUG_FBPAUG_HPP
#define FBPAUG_FBPAUG_HPP

#include "fbpaug/augment.hpp"
#include "fbpaug/config.hpp"
#include "fbpaug/filtering.hpp"
#include "fbpaug/image.hpp"
#include "fbpaug/io.hpp"
#include "fbpaug/metrics.hpp"
#include "fbpaug/phantoms.hpp"
#include "fbpaug/quality.hpp"
#include "fbpaug/rng.hpp"
#include "fbpaug/tomography.hpp"
#include "fbpaug/version.hpp"

#endif  // FBPAUG_FBPAUG_HPP

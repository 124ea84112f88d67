#ifndef FUSIONFRAME_FUSIONFRAME_HPP
#define FUSIONFRAME_FUSIONFRAME_HPP

#include "fusionframe/errors.hpp"
#include "fusionframe/linalg.hpp"
#include "fusionframe/frames.hpp"
#include "fusionframe/fusion.hpp"
#include "fusionframe/construct.hpp"
#include "fusionframe/refine.hpp"
#include "fusionframe/random.hpp"
#include "fusionframe/examples.hpp"
#include "fusionframe/sweep.hpp"
#include "fusionframe/checks.hpp"
#include "fusionframe/family_io.hpp"

#endif // FUSIONFRAME_FUSIONFRAME_HPP

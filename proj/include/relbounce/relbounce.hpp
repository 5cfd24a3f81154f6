#pragma once

// Numerical toolkit for a relativistic particle under a constant force plus
// linear velocity dissipation: the constant of motion in its three closed-form
// regimes, trajectory integration with a conservation audit, the Lagrangian
// and momentum generated from the constant, and the velocity-representation
// quantization of the first-order constant including the dissipative
// relativistic bouncer spectrum.

#include "relbounce/airy.hpp"
#include "relbounce/constant_motion.hpp"
#include "relbounce/lagrangian.hpp"
#include "relbounce/model.hpp"
#include "relbounce/numerics.hpp"
#include "relbounce/quantum.hpp"
#include "relbounce/trajectory.hpp"

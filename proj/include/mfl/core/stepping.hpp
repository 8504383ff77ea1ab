#pragma once

namespace mfl {

/// Number of equal steps covering t with step at most dt (0 when t = 0).
int uniform_steps(double t, double dt);

}  // namespace mfl

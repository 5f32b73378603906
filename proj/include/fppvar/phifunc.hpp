#pragma once

namespace fppvar {

/// phi(u) = 2 int_0^1 u^{2t} / (1+t)^2 dt on [0,1].
///
/// Adaptive Simpson on the log-form integrand e^{2t ln u}/(1+t)^2, accurate
/// to 1e-10 absolute for every u in (0,1), subnormals included. phi(0) = 0
/// and phi(1) = 1 are returned exactly.
double phi(double u);

/// -1/ln(u), the u -> 0 equivalent of phi; phi(u) ln(1/u) = 1 - 1/ln(1/u) + ...
/// Defined on the open interval (0,1).
double phi_asymptotic(double u);

} // namespace fppvar

#pragma once

#include <array>
#include <cstddef>

namespace navsim {

// Classical 4th-order Runge-Kutta step for a fixed-size autonomous system.
// `deriv` maps state -> state derivative. Convergence of this routine is
// checked directly against analytic solutions in the test suite.
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_classic(const std::array<double, N>& y, double dt, Deriv&& deriv) {
    const std::array<double, N> k1 = deriv(y);

    std::array<double, N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    const std::array<double, N> k2 = deriv(tmp);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    const std::array<double, N> k3 = deriv(tmp);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
    const std::array<double, N> k4 = deriv(tmp);

    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

}  // namespace navsim

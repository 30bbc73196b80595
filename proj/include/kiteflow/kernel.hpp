#pragma once

// Special functions of kite geometry: the half-angle function f_theta, its
// derivative, inverse and antiderivative, the complex extension to the strip
// |Im z| < pi, and the hyperbolic angle functions built from it.
//
// All functions are templated on the real scalar type and are pure.

#include <cmath>
#include <complex>
#include <string>

#include "kiteflow/dilog.hpp"
#include "kiteflow/error.hpp"

namespace kiteflow
{

namespace detail
{

template <class T>
void require_angle(T theta)
{
    if (!(theta > T(0) && theta < kPi<T>))
        throw Error(ErrorKind::DomainError,
                    "intersection angle outside (0, pi): " + std::to_string(double(theta)));
}

}  // namespace detail

/// Half-angle of a kite at the vertex with log-radius difference x.
template <class T>
T f_theta(T theta, T x)
{
    detail::require_angle(theta);
    if (x > T(700))
        return kPi<T> - theta - f_theta(theta, -x);
    const T ex = std::exp(x);
    return std::atan2(ex * std::sin(theta), T(1) - ex * std::cos(theta));
}

template <class T>
T f_theta_prime(T theta, T x)
{
    detail::require_angle(theta);
    return std::sin(theta) / (T(2) * (std::cosh(x) - std::cos(theta)));
}

template <class T>
T f_theta_second(T theta, T x)
{
    detail::require_angle(theta);
    const T d = std::cosh(x) - std::cos(theta);
    return -std::sin(theta) * std::sinh(x) / (T(2) * d * d);
}

/// Inverse of f_theta on (0, pi - theta).
template <class T>
T f_theta_inv(T theta, T y)
{
    detail::require_angle(theta);
    if (!(y > T(0) && y < kPi<T> - theta))
        throw Error(ErrorKind::DomainError, "f_theta_inv: argument outside (0, pi - theta)");
    return std::log(std::sin(y) / std::sin(y + theta));
}

/// Antiderivative of f_theta vanishing at -inf: Im Li2(exp(x + i theta)).
template <class T>
T big_F_theta(T theta, T x)
{
    detail::require_angle(theta);
    if (x > T(0))
        return (kPi<T> - theta) * x + big_F_theta(theta, -x);
    return std::imag(dilog(std::polar(std::exp(x), theta)));
}

/**
 * Analytic continuation of f_theta to x + i beta, |beta| < pi, off the slits
 * {x = 0, |beta| >= theta}.
 *
 * The principal-log formula is analytic for x <= 0 and for |beta| < theta;
 * the remaining quarter-strips use f(z) = pi - theta - f(-z).
 */
template <class T>
std::complex<T> f_theta_complex(T theta, T x, T beta)
{
    using C = std::complex<T>;
    detail::require_angle(theta);
    if (!(std::abs(beta) < kPi<T>))
        throw Error(ErrorKind::DomainError, "f_theta_complex: |beta| must be < pi");
    constexpr T cut_tol = T(1e-12);
    if (std::abs(x) <= cut_tol && std::abs(beta) >= theta - cut_tol)
        throw Error(ErrorKind::BranchCut, "f_theta_complex: point on the slit x = 0, |beta| >= theta");

    if (x > T(0) && (std::abs(beta) >= theta || x > T(700)))
        return C(kPi<T> - theta) - f_theta_complex(theta, -x, -beta);

    const C z(x, beta);
    const C i(0, 1);
    const C num = std::log(C(1) - std::exp(z - i * theta));
    const C den = std::log(C(1) - std::exp(z + i * theta));
    return (num - den) / (T(2) * i);
}

/// Hyperbolic kite angle at the center with variable rho0 (rho = log tanh(r/2)).
template <class T>
T phi_hyp(T theta, T rho0, T rho1)
{
    if (!(rho0 < T(0) && rho1 < T(0)))
        throw Error(ErrorKind::DomainError, "phi_hyp: rho must be negative");
    return f_theta(theta, rho1 - rho0) - f_theta(theta, rho1 + rho0);
}

/// d phi_hyp / d rho1; positive for rho0, rho1 < 0.
template <class T>
T phi_hyp_d_rho1(T theta, T rho0, T rho1)
{
    return f_theta_prime(theta, rho1 - rho0) - f_theta_prime(theta, rho1 + rho0);
}

/// Angle at the center of a disc circle whose neighbour crosses the unit
/// circle with exterior angle beta.
template <class T>
T phi_gen(T theta, T rho, T beta)
{
    if (!(rho < T(0)))
        throw Error(ErrorKind::DomainError, "phi_gen: rho must be negative");
    if (!(beta >= T(0) && beta < kPi<T>))
        throw Error(ErrorKind::DomainError, "phi_gen: beta outside [0, pi)");
    return std::real(f_theta_complex(theta, -rho, beta) - f_theta_complex(theta, rho, beta));
}

/// phi_gen from the log-ratio form, branch taken in (0, pi].
template <class T>
T phi_gen_log_ratio(T theta, T rho, T beta)
{
    detail::require_angle(theta);
    const std::complex<T> w =
        std::complex<T>(std::cos(beta)) - std::cosh(std::complex<T>(rho, theta));
    T a = std::arg(w);
    if (a <= T(0))
        a += kPi<T>;
    return a;
}

template <class T>
T phi_gen_d_beta(T theta, T rho, T beta)
{
    const std::complex<T> c = std::cosh(std::complex<T>(rho, beta)) - std::cos(theta);
    return -std::sin(theta) * std::sinh(rho) * std::sin(beta) / std::norm(c);
}

/**
 * Boundary potential F_{beta,theta}, even in x. Evaluated from the eight-term
 * dilogarithm expression on the principal branch; for beta > theta the two
 * terms Li2(exp(-x + i(beta - theta))) and its mirror sit across the cut and
 * contribute the continuation correction -2 pi x.
 */
template <class T>
T big_F_beta_theta(T beta, T theta, T x)
{
    using C = std::complex<T>;
    detail::require_angle(theta);
    if (!(beta >= T(0) && beta < kPi<T>))
        throw Error(ErrorKind::DomainError, "big_F_beta_theta: beta outside [0, pi)");
    if (x > T(0))
        x = -x;
    const C i(0, 1);
    auto li = [](const C& w) { return dilog(std::exp(w)); };

    if (beta == theta) {
        // Only unit-disc arguments; avoids evaluating on the cut.
        const C s = li(x + i * (beta + theta)) - li(x + i * (beta - theta)) +
                    li(x - i * (beta - theta)) - li(x - i * (beta + theta));
        return std::real(s / i) - T(2) * (kPi<T> - theta) * x;
    }

    const C s = li(x + i * beta + i * theta) - li(x + i * beta - i * theta) -
                li(-x + i * beta - i * theta) + li(-x + i * beta + i * theta) +
                li(x - i * beta + i * theta) - li(x - i * beta - i * theta) -
                li(-x - i * beta - i * theta) + li(-x - i * beta + i * theta);
    T value = std::real(s / (T(2) * i));
    if (beta > theta)
        value -= T(2) * kPi<T> * x;
    return value;
}

/// Closed-form second derivative of F_{beta,theta}.
template <class T>
T big_F_beta_theta_dxx(T beta, T theta, T x)
{
    const T a = std::cosh(x) * std::cos(beta) - std::cos(theta);
    const T b = std::sinh(x) * std::sin(beta);
    return T(2) * std::sin(theta) * a / (a * a + b * b);
}

/// Geometry of the kite spanned by two circles meeting at exterior angle theta.
template <class T>
struct KiteGeometry {
    T theta;
    T r0, r1;
    /// center distance
    T L;
    /// distance between the two intersection points
    T H;
    T half_angle0, half_angle1;
    bool convex;
};

template <class T>
KiteGeometry<T> kite(T theta, T r0, T r1)
{
    detail::require_angle(theta);
    if (!(r0 > T(0) && r1 > T(0)))
        throw Error(ErrorKind::DomainError, "kite: radii must be positive");
    KiteGeometry<T> k;
    k.theta = theta;
    k.r0 = r0;
    k.r1 = r1;
    const T c = std::cos(theta);
    // the angle at each black vertex is theta
    k.L = std::sqrt(r0 * r0 + r1 * r1 - T(2) * r0 * r1 * c);
    k.H = T(2) * r0 * r1 * std::sin(theta) / k.L;
    k.half_angle0 = f_theta(theta, std::log(r1) - std::log(r0));
    k.half_angle1 = kPi<T> - theta - k.half_angle0;
    k.convex = (r1 / r0 >= c) && (r0 / r1 >= c);
    return k;
}

}  // namespace kiteflow

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>

namespace kiteflow
{

template <class T>
constexpr T kPi = T(3.141592653589793238462643383279502884L);

namespace detail
{

// B_{2k} / (2k+1)! for k = 1..20; the Bernoulli expansion of Li2 in
// u = -log(1 - z) is u - u^2/4 + sum_k c_k u^(2k+1).
inline constexpr std::array<long double, 20> kDilogBernoulli{
    2.77777777777777777778e-02L,  -2.77777777777777777778e-04L,
    4.72411186696900982664e-06L,  -9.18577307466196355736e-08L,
    1.89788699889709990030e-09L,  -4.06476164514422552681e-11L,
    8.92169102045645255522e-13L,  -1.99392958607210756872e-14L,
    4.51898002961991819165e-16L,  -1.03565176121812470145e-17L,
    2.39521862102618674574e-19L,  -5.58178587432500933628e-21L,
    1.30915075541832128581e-22L,  -3.08741980242674029324e-24L,
    7.31597565270220342036e-26L,  -1.74084565723400074003e-27L,
    4.15763564461389971961e-29L,  -9.96214848828462210319e-31L,
    2.39403442489616530052e-32L,  -5.76834735536739008429e-34L};

template <class T>
std::complex<T> dilog_bernoulli(const std::complex<T>& u)
{
    const std::complex<T> u2 = u * u;
    std::complex<T> sum{0};
    std::complex<T> power = u * u2;
    for (const auto c : kDilogBernoulli) {
        const std::complex<T> term = T(c) * power;
        sum += term;
        if (std::abs(term) <= std::numeric_limits<T>::epsilon() * std::abs(sum))
            break;
        power *= u2;
    }
    return u - u2 / T(4) + sum;
}

}  // namespace detail

/**
 * Complex dilogarithm Li2(z) on the principal branch (cut along [1, inf)).
 *
 * Direct power series for |z| <= 1/2. Elsewhere the argument is moved into
 * the unit disc by z -> 1/z and into |1 - z| <= 1 by z -> 1 - z, and the
 * Bernoulli series in -log(1 - z) finishes the job.
 */
template <class T>
std::complex<T> dilog(const std::complex<T>& z)
{
    using C = std::complex<T>;
    constexpr T pi2_6 = kPi<T> * kPi<T> / T(6);
    const T eps = std::numeric_limits<T>::epsilon();

    if (z == C(0))
        return C(0);
    if (z == C(1))
        return C(pi2_6);

    const T nz = std::norm(z);
    if (nz <= T(0.25)) {
        C sum{0};
        C power = z;
        for (int k = 1; k < 200; ++k) {
            const C term = power / T(k * k);
            sum += term;
            if (std::abs(term) <= eps * std::abs(sum))
                break;
            power *= z;
        }
        return sum;
    }

    const T re = z.real();
    if (re <= T(0.5)) {
        if (nz > T(1)) {
            const C l = std::log(-z);
            return -detail::dilog_bernoulli(-std::log(C(1) - C(1) / z)) - pi2_6 -
                   T(0.5) * l * l;
        }
        return detail::dilog_bernoulli(-std::log(C(1) - z));
    }
    if (nz <= T(2) * re) {
        const C l = std::log(z);
        return -detail::dilog_bernoulli(-l) + pi2_6 - l * std::log(C(1) - z);
    }
    const C l = std::log(-z);
    return -detail::dilog_bernoulli(-std::log(C(1) - C(1) / z)) - pi2_6 -
           T(0.5) * l * l;
}

}  // namespace kiteflow

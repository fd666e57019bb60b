#include "infogeo/numerics.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <random>

namespace infogeo {

namespace {

struct SimpsonState {
    const std::function<double(double)>& fn;
    int intervals_left;
};

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                       double whole, double tol) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.fn(lm);
    const double frm = st.fn(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    st.intervals_left -= 2;
    if (st.intervals_left <= 0) {
        throw NumericError("adaptive_simpson: subdivision cap reached before tolerance");
    }
    return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol) +
           simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol);
}

double halton_radical_inverse(std::uint64_t index, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double scale = inv;
    double value = 0.0;
    while (index > 0) {
        value += static_cast<double>(index % base) * scale;
        index /= base;
        scale *= inv;
    }
    return value;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double abs_tol, int max_intervals) {
    if (a == b) return 0.0;
    const double fa = fn(a);
    const double fb = fn(b);
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
        throw NumericError("adaptive_simpson: non-finite integrand value");
    }
    SimpsonState st{fn, max_intervals};
    const double whole = simpson(fa, fm, fb, a, b);
    return simpson_recurse(st, a, b, fa, fm, fb, whole, abs_tol);
}

std::vector<Vec> halton_points(int count, const Vec& lo, const Vec& hi, std::uint64_t seed) {
    const int d = static_cast<int>(lo.size());
    if (d > static_cast<int>(std::size(kPrimes))) {
        throw ContractViolation("halton_points: dimension exceeds the prime table");
    }
    // Cranley-Patterson rotation offsets from the seed.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vec shift(d);
    for (int k = 0; k < d; ++k) shift(k) = unif(rng);

    std::vector<Vec> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vec p(d);
        for (int k = 0; k < d; ++k) {
            double u = halton_radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[k]);
            u += shift(k);
            u -= std::floor(u);
            p(k) = lo(k) + u * (hi(k) - lo(k));
        }
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace infogeo

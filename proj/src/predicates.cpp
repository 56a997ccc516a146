// Filtered exact predicates. The static error bounds are the ones derived by
// Shewchuk for the plain double evaluation order used below; inputs that land
// inside the bound are re-evaluated with GMP rationals, which represent every
// finite double exactly.

#include "d8/geometry.hpp"

#include <gmpxx.h>

#include <cmath>
#include <limits>

namespace d8 {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;
constexpr double kSqrt3 = 1.7320508075688772;

int orient_exact(const Vec2& a, const Vec2& b, const Vec2& c) {
    const mpq_class acx = mpq_class(a.x) - mpq_class(c.x);
    const mpq_class bcx = mpq_class(b.x) - mpq_class(c.x);
    const mpq_class acy = mpq_class(a.y) - mpq_class(c.y);
    const mpq_class bcy = mpq_class(b.y) - mpq_class(c.y);
    const mpq_class det = acx * bcy - acy * bcx;
    return sgn(det);
}

int in_circle_exact(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const mpq_class dx(d.x), dy(d.y);
    const mpq_class adx = mpq_class(a.x) - dx, ady = mpq_class(a.y) - dy;
    const mpq_class bdx = mpq_class(b.x) - dx, bdy = mpq_class(b.y) - dy;
    const mpq_class cdx = mpq_class(c.x) - dx, cdy = mpq_class(c.y) - dy;
    const mpq_class alift = adx * adx + ady * ady;
    const mpq_class blift = bdx * bdx + bdy * bdy;
    const mpq_class clift = cdx * cdx + cdy * cdy;
    const mpq_class det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                          clift * (adx * bdy - bdx * ady);
    return sgn(det);
}

// sign(a - sqrt(3) * b) for exact rationals.
int sign_minus_sqrt3(const mpq_class& a, const mpq_class& b) {
    const int sa = sgn(a);
    const int sb = sgn(b);
    if (sb == 0) return sa;
    if (sa == 0) return -sb;
    if (sa != sb) return sa;
    const mpq_class diff = a * a - 3 * b * b;
    return sa * sgn(diff);
}

// sign(a - sqrt(3) * b) where a and b are the exact differences given by
// (a1 - a0) and (b1 - b0).
int filtered_minus_sqrt3(double a1, double a0, double b1, double b0) {
    const double a = a1 - a0;
    const double b = b1 - b0;
    const double value = a - kSqrt3 * b;
    const double bound = 8.0 * kEps * (std::fabs(a1) + std::fabs(a0) + 2.0 * (std::fabs(b1) + std::fabs(b0)));
    if (value > bound) return 1;
    if (value < -bound) return -1;
    return sign_minus_sqrt3(mpq_class(a1) - mpq_class(a0), mpq_class(b1) - mpq_class(b0));
}

}  // namespace

int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;
    const double errbound = kOrientBound * (std::fabs(detleft) + std::fabs(detright));
    if (det > errbound) return 1;
    if (det < -errbound) return -1;
    if (detleft == 0.0 && detright == 0.0) {
        // Both products are exact zeros only when a factor is an exact zero.
        if ((a.x == c.x || b.y == c.y) && (a.y == c.y || b.x == c.x)) return 0;
    }
    return orient_exact(a, b, c);
}

int in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                             (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                             (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
    const double errbound = kInCircleBound * permanent;
    if (det > errbound) return 1;
    if (det < -errbound) return -1;
    return in_circle_exact(a, b, c, d);
}

int side_of_sqrt3_line(const Vec2& p, const Vec2& q) { return filtered_minus_sqrt3(q.y, p.y, q.x, p.x); }

int side_of_neg_sqrt3_line(const Vec2& p, const Vec2& q) {
    // -(qy - py) - sqrt(3)(qx - px) == (py - qy) - sqrt(3)(qx - px)
    return filtered_minus_sqrt3(p.y, q.y, q.x, p.x);
}

}  // namespace d8

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fibmap/errors.hpp"
#include "fibmap/kneading.hpp"
#include "fibmap/mp.hpp"
#include "fibmap/mp_dynamics.hpp"

namespace fibmap {

struct Interval {
    mp::Real lo, hi;

    bool contains(const mp::Real& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    mp::Real length() const { return hi - lo; }
};

// A map of type (2,1): quadratic branch q (x - x0)^2 - c0 on T (critical
// point x0 interior), affine branch a x + b on J.  Domains are disjoint;
// component +1 iff the J-branch preserves orientation.
class ClassAMap {
  public:
    ClassAMap(Interval J, Interval T, mp::Real q, mp::Real c0, mp::Real x0, mp::Real a,
              mp::Real b, int component)
        : J_(std::move(J)), T_(std::move(T)), q_(std::move(q)), c0_(std::move(c0)),
          x0_(std::move(x0)), a_(std::move(a)), b_(std::move(b)), component_(component) {
        if (T_.hi < T_.lo || J_.hi < J_.lo) throw ShapeError("ClassAMap: empty branch domain");
        if (!(J_.hi < T_.lo || T_.hi < J_.lo))
            throw ShapeError("ClassAMap: branch domains overlap");
        if (!(T_.lo < x0_ && x0_ < T_.hi))
            throw ShapeError("ClassAMap: critical point not interior to T");
        if ((component_ > 0) != (a_.sign() > 0))
            throw ShapeError("ClassAMap: component inconsistent with J-branch slope");
    }

    mp::Real eval(const mp::Real& x) const {
        mpfr_prec_t p = x.prec();
        if (J_.contains(x)) return (a_ * x + b_).rounded_to(p);
        mp::Real d = x - x0_;
        return (q_ * d * d - c0_).rounded_to(p);
    }

    // Continuation by the nearest branch, for locator bisections that must
    // probe just past a domain endpoint.
    mp::Real eval_extended(const mp::Real& x) const {
        mpfr_prec_t p = x.prec();
        bool use_j = J_.contains(x);
        if (!use_j && !T_.contains(x)) {
            mp::Real dj = x < J_.lo ? J_.lo - x : x - J_.hi;
            mp::Real dt = x < T_.lo ? T_.lo - x : x - T_.hi;
            use_j = dj < dt;
        }
        if (use_j) return (a_ * x + b_).rounded_to(p);
        mp::Real d = x - x0_;
        return (q_ * d * d - c0_).rounded_to(p);
    }

    BranchCell classify(const mp::Real& x) const {
        if (J_.contains(x)) return BranchCell::J;
        if (T_.contains(x)) return x < x0_ ? BranchCell::TMinus : BranchCell::TPlus;
        return BranchCell::Outside;
    }

    const Interval& Jdom() const { return J_; }
    const Interval& Tdom() const { return T_; }
    const mp::Real& critical() const { return x0_; }
    int component() const { return component_; }
    const mp::Real& quad_coeff() const { return q_; }
    const mp::Real& quad_c0() const { return c0_; }
    const mp::Real& lin_slope() const { return a_; }
    const mp::Real& lin_offset() const { return b_; }

  private:
    Interval J_, T_;
    mp::Real q_, c0_, x0_, a_, b_;
    int component_;
};

// The explicit family of section 7: T = [-1, lam], J = [-c, -c + q lam^2],
// f|T = q x^2 - c with q = c + lam, f|J = a x + b with a = (1+v)/((c+lam) lam^2),
// b = a c - 1, forcing 0 -> -c -> -1 -> lam -> -c + q lam^2 -> v.
inline ClassAMap example21(const mp::Real& c, const mp::Real& lam, const mp::Real& v,
                           mpfr_prec_t prec = 512) {
    mp::Real C = c.rounded_to(prec), L = lam.rounded_to(prec), V = v.rounded_to(prec);
    if (!(C.sign() > 0 && L.sign() > 0))
        throw ShapeError("example21: need c > 0 and lam > 0");
    if (V.sign() < 0 || V > L) throw ShapeError("example21: need 0 <= v <= lam");
    mp::Real q = C + L;
    mp::Real a = (mp::Real::of_long(1, prec) + V) / (q * L * L);
    mp::Real b = a * C - mp::Real::of_long(1, prec);
    // domain endpoints are orbit points; pad outward so re-rounded iterates
    // landing exactly on them still classify inside
    mp::Real eta = C * mp::Real::pow2(-static_cast<long>(3 * prec / 4), 64);
    Interval T{mp::Real::of_long(-1, prec) - eta, L + eta};
    Interval J{-C - eta, -C + q * L * L + eta};
    ClassAMap m(J, T, q, C, mp::Real::of_long(0, prec), a, b, +1);
    // the forced orbit head must come out to working accuracy
    mp::Real x = mp::Real::of_long(0, prec);
    const mp::Real expect[5] = {-C, mp::Real::of_long(-1, prec), L, -C + q * L * L, V};
    for (int i = 0; i < 5; ++i) {
        x = m.eval(x);
        mp::Real diff = x - expect[i];
        double scale = std::max(0.0, expect[i].is_zero() ? 0.0 : expect[i].log2_abs());
        if (!diff.is_zero() && diff.log2_abs() - scale > -static_cast<double>(prec) / 2)
            throw ShapeError("example21: forced orbit head failed at step " +
                             std::to_string(i + 1));
    }
    return m;
}

// Restriction of the quadratic Fibonacci map onto I^2 u J^2 = [x_5,x_2] u [x_1,x_4]
// (Eq. 6-8).  Both branches evaluate x^2 + c; the critical orbit is untouched.
class SurgeryMap {
  public:
    SurgeryMap(mp::Real c, Interval J2, Interval T2)
        : c_(std::move(c)), J_(std::move(J2)), T_(std::move(T2)) {}

    mp::Real eval(const mp::Real& x) const {
        mpfr_prec_t p = x.prec();
        return (sqr(x) + c_).rounded_to(p);
    }
    mp::Real eval_extended(const mp::Real& x) const { return eval(x); }
    BranchCell classify(const mp::Real& x) const {
        if (J_.contains(x)) return BranchCell::J;
        if (T_.contains(x)) return x.sign() < 0 ? BranchCell::TMinus : BranchCell::TPlus;
        return BranchCell::Outside;
    }

    const Interval& Jdom() const { return J_; }
    const Interval& Tdom() const { return T_; }
    mp::Real critical() const { return mp::Real::of_long(0, c_.prec()); }
    int component() const { return -1; } // f decreases on [x_1, x_4] (both negative)
    const mp::Real& param() const { return c_; }

  private:
    mp::Real c_;
    Interval J_, T_;
};

inline SurgeryMap surgery_from_unimodal(const mp::Real& c, mpfr_prec_t prec = 512) {
    mp::Real C = c.rounded_to(prec);
    mp::Real x = mp::Real::of_long(0, prec);
    std::vector<mp::Real> xs{x};
    for (int i = 1; i <= 5; ++i) {
        x = sqr(x) + C;
        xs.push_back(x);
    }
    if (!(xs[1] < xs[4] && xs[4] < xs[5] && xs[5] < xs[2]))
        throw ShapeError("surgery_from_unimodal: x_1 < x_4 < x_5 < x_2 violated");
    // pad outward: every domain endpoint is itself an orbit point
    mp::Real eta = abs(xs[1]) * mp::Real::pow2(-static_cast<long>(3 * prec / 4), 64);
    return SurgeryMap(C, Interval{xs[1] - eta, xs[4] + eta}, Interval{xs[5] - eta, xs[2] + eta});
}

// ---- numeric renormalization tower ----

struct Affine {
    mp::Real scale, offset; // y = scale * x + offset

    mp::Real apply(const mp::Real& x) const { return scale * x + offset; }
};

struct RenormLevel {
    Interval T, J;
    int component = 0;
    std::int64_t iter_T = 0, iter_J = 0; // base iterate counts (6-3)
    Affine rescale;                      // T -> [-1,1], critical point a minimum
    bool incl_T_lower = false;           // T^{n+2} subset T_n
    bool incl_T_upper = false;           // T_n subset T^{n+1}
    bool incl_J = false;                 // J^{n+2} subset J_n
};

// A class-A base map plus the tower of located return domains.
class ClassASystem {
  public:
    explicit ClassASystem(ClassAMap base) : base_(std::move(base)) {}
    explicit ClassASystem(SurgeryMap base) : base_(std::move(base)) {}

    mp::Real eval_base(const mp::Real& x) const {
        return std::visit([&](const auto& m) { return m.eval(x); }, base_);
    }
    BranchCell classify_base(const mp::Real& x) const {
        return std::visit([&](const auto& m) { return m.classify(x); }, base_);
    }
    mp::Real critical() const {
        return std::visit([](const auto& m) { return m.critical(); }, base_);
    }
    int base_component() const {
        return std::visit([](const auto& m) { return m.component(); }, base_);
    }
    const Interval& base_T() const {
        return std::visit([](const auto& m) -> const Interval& { return m.Tdom(); }, base_);
    }
    const Interval& base_J() const {
        return std::visit([](const auto& m) -> const Interval& { return m.Jdom(); }, base_);
    }

    int levels() const { return static_cast<int>(tower_.size()); }
    const RenormLevel& level(int n) const {
        if (n < 1 || n > levels()) throw DomainError("ClassASystem: no such level");
        return tower_[static_cast<size_t>(n - 1)];
    }

    mp::Real eval_base_extended(const mp::Real& x) const {
        return std::visit([&](const auto& m) { return m.eval_extended(x); }, base_);
    }

    // f_n(x): u(n+1) base steps on T_n, u(n) on J_n (Eq. 6-3); level 0 is the
    // base.  Points just outside a located domain (locator probes, boundary
    // iterates) take the nearest branch and the nearest iterate count.
    mp::Real eval_level(int n, const mp::Real& x) const {
        if (n == 0) return eval_base_extended(x);
        const RenormLevel& lv = level(n);
        std::int64_t steps;
        if (lv.T.contains(x))
            steps = lv.iter_T;
        else if (lv.J.contains(x))
            steps = lv.iter_J;
        else {
            mp::Real dt = x < lv.T.lo ? lv.T.lo - x : x - lv.T.hi;
            mp::Real dj = x < lv.J.lo ? lv.J.lo - x : x - lv.J.hi;
            steps = dt < dj ? lv.iter_T : lv.iter_J;
        }
        mp::Real y = x;
        for (std::int64_t i = 0; i < steps; ++i) y = eval_base_extended(y);
        return y;
    }

    BranchCell classify_level(int n, const mp::Real& x) const {
        if (n == 0) return classify_base(x);
        const RenormLevel& lv = level(n);
        if (lv.J.contains(x)) return BranchCell::J;
        if (lv.T.contains(x))
            return x < critical() ? BranchCell::TMinus : BranchCell::TPlus;
        return BranchCell::Outside;
    }

    int component_at(int n) const {
        return n == 0 ? base_component() : level(n).component;
    }

    std::vector<RenormLevel>& tower() { return tower_; }
    const std::vector<RenormLevel>& tower() const { return tower_; }

  private:
    std::variant<ClassAMap, SurgeryMap> base_;
    std::vector<RenormLevel> tower_;
};

namespace detail {

// Base critical orbit values x_1..x_N (uncertified fast path at precision p).
inline std::vector<mp::Real> base_orbit(const ClassASystem& sys, std::int64_t N, mpfr_prec_t p) {
    std::vector<mp::Real> xs;
    xs.reserve(static_cast<size_t>(N) + 1);
    xs.push_back(sys.critical().rounded_to(p));
    mp::Real x = xs[0];
    for (std::int64_t i = 1; i <= N; ++i) {
        if (sys.classify_base(x) == BranchCell::Outside)
            throw ShapeError("base_orbit: critical orbit escapes at step " + std::to_string(i));
        x = sys.eval_base(x);
        xs.push_back(x);
    }
    return xs;
}

} // namespace detail

// One renormalization step: locates T_{n+1} (symmetric about the critical
// point; f_n^2 maps it unimodally into T_n with both endpoints on one
// endpoint of T_n) and J_{n+1} (diffeomorphic f_n-preimage of T_n on the
// same side of the critical point as f_n^2(0)), then validates the
// inclusions (6-1)/(6-2) against the base critical orbit.
inline RenormLevel renormalize_numeric(ClassASystem& sys, mpfr_prec_t p) {
    int n_prev = sys.levels();
    int n_new = n_prev + 1;
    mp::Real x0 = sys.critical().rounded_to(2 * p);

    std::int64_t orbit_need = fib_u64(n_new + 1) + fib_u64(n_new + 3) + 2;
    auto xs = detail::base_orbit(sys, orbit_need, 2 * p);
    auto dist = [&](int k) { return abs(xs[static_cast<size_t>(fib_u64(k))] - x0); };

    // renormalizability: x1 of f_{n_prev} in J-side, x2 back in T-side
    {
        mp::Real x1 = xs[static_cast<size_t>(fib_u64(n_new))];
        mp::Real x2 = xs[static_cast<size_t>(fib_u64(n_new + 1))];
        bool ok1 = n_prev == 0 ? sys.classify_base(x1) == BranchCell::J
                               : sys.level(n_prev).J.contains(x1);
        bool ok2 = n_prev == 0 ? sys.classify_base(x2) != BranchCell::Outside &&
                                     sys.classify_base(x2) != BranchCell::J
                               : sys.level(n_prev).T.contains(x2);
        if (!ok1 || !ok2)
            throw ShapeError("renormalize_numeric: level " + std::to_string(n_new) +
                             " not renormalizable (x1/x2 misplaced)");
    }

    Interval T_prev = n_prev == 0 ? sys.base_T() : sys.level(n_prev).T;

    // T_{n_new}: bisect the radius e between |x_{u(n+2)}-x0| and |x_{u(n+1)}-x0|.
    auto h_inside = [&](const mp::Real& e) {
        mp::Real y = x0 + e;
        mp::Real y1 = sys.eval_level(n_prev, y);
        BranchCell c1 = n_prev == 0 ? sys.classify_base(y1)
                                    : (sys.level(n_prev).J.contains(y1) ? BranchCell::J
                                                                        : BranchCell::Outside);
        if (c1 != BranchCell::J) return false;
        mp::Real y2 = sys.eval_level(n_prev, y1);
        return T_prev.contains(y2);
    };
    mp::Real e_lo = dist(n_new + 2), e_hi = dist(n_new + 1);
    if (!h_inside(e_lo) || h_inside(e_hi))
        throw ShapeError("renormalize_numeric: T bracket invalid at level " +
                         std::to_string(n_new));
    for (mpfr_prec_t it = 0; it < p; ++it) {
        mp::Real mid = (e_lo + e_hi) * mp::Real::of_double(0.5, 64);
        if (h_inside(mid))
            e_lo = mid;
        else
            e_hi = mid;
    }
    mp::Real e = e_lo;
    RenormLevel lv;
    lv.T = Interval{x0 - e, x0 + e};
    lv.iter_T = fib_u64(n_new + 1);
    lv.iter_J = fib_u64(n_new);
    lv.component = -(n_prev == 0 ? sys.base_component() : sys.level(n_prev).component);

    // J_{n_new}: on the side of f_n^2(0) = x_{u(n+2)}; invert the monotone
    // branch of f_{n_prev}'s unimodal piece onto both endpoints of T_prev.
    int side = (xs[static_cast<size_t>(fib_u64(n_new + 1))] - x0).sign();
    if (side == 0) throw PrecisionError("renormalize_numeric: side undecidable");
    auto apply_T = [&](const mp::Real& y) { return sys.eval_level(n_prev, y); };
    mp::Real A = side > 0 ? lv.T.hi : lv.T.lo;
    mp::Real B = side > 0 ? T_prev.hi : T_prev.lo;
    mp::Real fA = apply_T(A), fB = apply_T(B);
    auto invert_to = [&](const mp::Real& target) {
        mp::Real lo = A, hi = B;
        mp::Real flo = fA;
        bool rising = fB > fA;
        for (mpfr_prec_t it = 0; it < p; ++it) {
            mp::Real mid = (lo + hi) * mp::Real::of_double(0.5, 64);
            mp::Real fm = apply_T(mid);
            bool below = rising ? fm < target : fm > target;
            if (below)
                lo = mid;
            else
                hi = mid;
        }
        return (lo + hi) * mp::Real::of_double(0.5, 64);
    };
    if ((fA < T_prev.lo) == (fB < T_prev.lo) && (fA > T_prev.hi) == (fB > T_prev.hi))
        throw ShapeError("renormalize_numeric: J bracket does not straddle T at level " +
                         std::to_string(n_new));
    mp::Real ja = invert_to(T_prev.lo), jb = invert_to(T_prev.hi);
    lv.J = ja < jb ? Interval{ja, jb} : Interval{jb, ja};

    // pad the located domains outward at the bisection resolution so orbit
    // points landing exactly on an endpoint still classify inside
    {
        mp::Real pad = T_prev.length() * mp::Real::pow2(-static_cast<long>(2 * p / 3), 64);
        lv.T.lo -= pad;
        lv.T.hi += pad;
        lv.J.lo -= pad;
        lv.J.hi += pad;
    }

    // rescale T_n -> [-1,1]; pick the orientation making the critical point a minimum
    {
        mp::Real y0 = apply_T(x0.rounded_to(2 * p));
        mp::Real ye = apply_T(lv.T.hi);
        bool is_min = y0 < ye;
        mp::Real two = mp::Real::of_long(2, 2 * p);
        mp::Real s = two / lv.T.length();
        if (!is_min) s = -s;
        lv.rescale.scale = s;
        lv.rescale.offset = -(s * (lv.T.lo + lv.T.hi)) * mp::Real::of_double(0.5, 64);
    }

    // (6-1)/(6-2) against the base orbit; closed inclusions may touch at
    // shared orbit points, so allow the certification-scale slack
    {
        mp::Real slack = T_prev.length() * mp::Real::pow2(-static_cast<long>(p / 2), 64);
        auto contains_slack = [&](const Interval& outer, const Interval& inner) {
            return outer.lo - slack <= inner.lo && inner.hi <= outer.hi + slack;
        };
        Interval Tn2{x0 - dist(n_new + 2), x0 + dist(n_new + 2)};
        Interval Tn1{x0 - dist(n_new + 1), x0 + dist(n_new + 1)};
        lv.incl_T_lower = contains_slack(lv.T, Tn2);
        lv.incl_T_upper = contains_slack(Tn1, lv.T);
        mp::Real ja2 = xs[static_cast<size_t>(fib_u64(n_new + 1))];
        mp::Real jb2 = xs[static_cast<size_t>(fib_u64(n_new + 1) + fib_u64(n_new + 3))];
        Interval Jn2 = ja2 < jb2 ? Interval{ja2, jb2} : Interval{jb2, ja2};
        lv.incl_J = contains_slack(lv.J, Jn2);
        if (!lv.incl_T_lower || !lv.incl_T_upper || !lv.incl_J)
            throw StructuralError("renormalize_numeric: inclusion (6-1)/(6-2) failed at level " +
                                  std::to_string(n_new));
    }

    sys.tower().push_back(lv);
    return lv;
}

// ---- tuning v (section 7: "one can adjust v to get a Fibonacci map") ----

struct VBracket {
    mp::Real lo, hi;
    std::int64_t match_depth = 0;
    mpfr_prec_t prec = 0;
    int iterations = 0;

    mp::Real mid() const { return (lo + hi) * mp::Real::of_double(0.5, 64); }
};

namespace detail {

// Direction of the first symbolic disagreement with fib^+ as v moves.
// v enters the orbit only as x_5, so dx_i/dv is the pure orientation
// product of the branches visited at steps 5..i-1.
inline int tune_compare(const mp::Real& c, const mp::Real& lam, const mp::Real& v,
                        const ClassASeq& target, std::int64_t horizon, mpfr_prec_t p,
                        std::int64_t* depth_out) {
    ClassAMap m = example21(c, lam, v, 2 * p);
    auto po = orbit_piecewise(m, mp::Real::of_long(0, p), horizon, p, +1);
    std::int64_t nsyms = static_cast<std::int64_t>(po.syms.syms.size());
    std::int64_t limit = po.escape_index ? po.escape_index : nsyms;
    for (std::int64_t i = 1; i <= limit; ++i) {
        bool differs = i > nsyms || po.syms.syms[static_cast<size_t>(i - 1)] !=
                                        target.syms[static_cast<size_t>(i - 1)];
        if (!differs) continue;
        if (i <= 5)
            throw ShapeError("tune_compare: forced head disagrees at step " + std::to_string(i));
        if (depth_out) *depth_out = i;
        // where must x_i go?
        ClassASym want = target.syms[static_cast<size_t>(i - 1)];
        const Interval& Td = m.Tdom();
        Interval target_iv = want == ClassASym::J
                                 ? m.Jdom()
                                 : (want == ClassASym::TMinus
                                        ? Interval{Td.lo, m.critical()}
                                        : Interval{m.critical(), Td.hi});
        const mp::Real& pt = po.orb.at(i);
        int need = pt < target_iv.lo ? +1 : -1;
        int orient = +1;
        for (std::int64_t j = 5; j < i; ++j) {
            ClassASym s = po.syms.syms[static_cast<size_t>(j - 1)];
            if (s == ClassASym::TMinus)
                orient = -orient;
            else if (s == ClassASym::J && m.component() < 0)
                orient = -orient;
        }
        return need * orient;
    }
    if (depth_out) *depth_out = limit;
    return 0;
}

} // namespace detail

// Bisection on v in [0, lam] until the kneading sequence matches fib^+
// through u(N); with width_bits > 0 the bracket is additionally narrowed
// below 2^-width_bits (the horizon extends on demand).  Monotonicity of the
// first disagreement in v is not assumed: the endpoints must bracket
// (opposite comparison signs) or SearchError.
inline VBracket tune_v(const mp::Real& c, const mp::Real& lam, int depth_index,
                       mpfr_prec_t start_prec = 256, int width_bits = 0) {
    if (depth_index < 3) throw DomainError("tune_v: depth index must be >= 3");
    std::int64_t horizon = 2 * fib_u64(depth_index);
    ClassASeq target = fib_classA(+1, horizon);
    mpfr_prec_t p = start_prec;

    auto cmp = [&](const mp::Real& v, std::int64_t* d) {
        for (;;) {
            try {
                return detail::tune_compare(c, lam, v, target, horizon, p, d);
            } catch (const PrecisionError&) {
                if (2 * p > (1 << 20)) throw;
                p *= 2;
            }
        }
    };

    mpfr_prec_t wp = std::max<mpfr_prec_t>(2 * start_prec, width_bits + 64);
    VBracket out{mp::Real::of_long(0, wp), lam.rounded_to(wp)};
    int clo = cmp(out.lo, nullptr), chi = cmp(out.hi, nullptr);
    if (clo == 0 || chi == 0 || clo == chi)
        throw SearchError("tune_v: endpoints do not bracket the Fibonacci kneading");
    std::int64_t need = fib_u64(depth_index);
    mp::Real width_goal = mp::Real::pow2(-std::max(width_bits, 1));
    int iters = 0;
    for (;;) {
        mp::Real mid = out.mid();
        std::int64_t depth = 0;
        int cm = cmp(mid, &depth);
        if (cm == 0) {
            if (width_bits > 0 && !(out.hi - out.lo < width_goal) && horizon < (1 << 22)) {
                horizon *= 2;
                target = fib_classA(+1, horizon);
                continue;
            }
            out.match_depth = horizon;
            break;
        }
        if (depth - 1 >= need && (width_bits == 0 || out.hi - out.lo < width_goal)) {
            out.match_depth = depth - 1;
            break;
        }
        if (cm == clo)
            out.lo = mid;
        else
            out.hi = mid;
        ++iters;
        if (iters > 4000) throw SearchError("tune_v: bisection did not converge");
    }
    out.prec = p;
    out.iterations = iters;
    return out;
}

// ---- geometry variation across the family (section 7) ----

struct GeometryRow {
    double c = 0, lam = 0, v = 0;
    double lambda_first = 0;           // ~ 1/c
    double a_estimate = 0;             // lambda_K 2^{K/3} at the deepest level K
    double a_renormalized = 0;         // same from the once-renormalized map
    double a_ratio = 0;                // a_renormalized / a_estimate
    int level_K = 0;
};

inline GeometryRow geometry_row(double c, double lam, int depth_index, mpfr_prec_t p) {
    mp::Real C = mp::Real::of_double(c, p), L = mp::Real::of_double(lam, p);
    // d_n through u(depth-2) needs v pinned far below the match window
    VBracket vb = tune_v(C, L, depth_index, p, 80);
    mp::Real v = vb.mid();
    ClassAMap m = example21(C, L, v, 2 * p);
    std::int64_t N = fib_u64(depth_index);
    auto po = orbit_piecewise(m, mp::Real::of_long(0, p), N, p, +1);
    if (po.escape_index)
        throw SearchError("geometry_row: tuned orbit escaped at " +
                          std::to_string(po.escape_index));
    int K = depth_index - 2;
    auto d = [&](int k) { return po.orb.at(fib_u64(k)).log2_abs(); };
    GeometryRow row;
    row.c = c;
    row.lam = lam;
    row.v = v.to_double();
    row.lambda_first = std::exp2(d(2) - d(1));
    row.level_K = K;
    double lamK = std::exp2(d(K) - d(K - 1));
    row.a_estimate = lamK * std::exp2(K / 3.0);
    // one renormalization; its lambda'_k comes from its own orbit
    ClassASystem sys(m);
    renormalize_numeric(sys, p);
    mp::Real y = sys.critical().rounded_to(p);
    std::vector<double> dr(static_cast<size_t>(K) + 2, 0.0);
    std::int64_t steps_done = 0;
    for (std::int64_t mstep = 1; mstep <= fib_u64(K); ++mstep) {
        y = sys.eval_level(1, y);
        ++steps_done;
        for (int k = 1; k <= K; ++k)
            if (mstep == fib_u64(k)) dr[static_cast<size_t>(k)] = (y - sys.critical()).log2_abs();
    }
    (void)steps_done;
    double lamK_r = std::exp2(dr[static_cast<size_t>(K - 1)] - dr[static_cast<size_t>(K - 2)]);
    row.a_renormalized = lamK_r * std::exp2((K - 1) / 3.0);
    // compare at matching level K-1 of the base
    double lamK1 = std::exp2(d(K - 1) - d(K - 2));
    double a_base_K1 = lamK1 * std::exp2((K - 1) / 3.0);
    row.a_ratio = row.a_renormalized / a_base_K1;
    return row;
}

inline std::vector<GeometryRow> geometry_experiment(const std::vector<double>& cs,
                                                    int depth_index, mpfr_prec_t p) {
    std::vector<GeometryRow> rows;
    for (double c : cs) rows.push_back(geometry_row(c, 1.0 / (2.0 * c), depth_index, p));
    return rows;
}

} // namespace fibmap

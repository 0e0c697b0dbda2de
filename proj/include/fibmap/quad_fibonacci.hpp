#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fibmap/cover.hpp"
#include "fibmap/errors.hpp"
#include "fibmap/kneading.hpp"
#include "fibmap/model_map.hpp"
#include "fibmap/mp.hpp"
#include "fibmap/mp_dynamics.hpp"

namespace fibmap {

// ---- locating the Fibonacci parameter ----

struct CBracket {
    mp::Real lo, hi;
    std::int64_t match_depth = 0; // midpoint itinerary agrees with fib_sign through here
    std::int64_t horizon = 0;
    mpfr_prec_t prec = 0;
    int iterations = 0;

    mp::Real mid() const { return (lo + hi) * mp::Real::of_double(0.5, 64); }
    double width_log2() const { return (hi - lo).log2_abs(); }
};

struct FindCOptions {
    mpfr_prec_t start_prec = 320;
    mpfr_prec_t max_prec = 1 << 20;
    std::int64_t max_horizon = 1 << 22;
};

namespace detail {

// Compare the critical itinerary of f_c against fib_sign.  Returns
// {dir, depth}: dir > 0 means c must increase, dir < 0 decrease, dir = 0
// matched through the horizon.  depth is the first disagreement index.
// The direction comes from the certified sign of dx_i/dc (recursion
// dx_{i+1} = 2 x_i dx_i + 1): within a parameter window x_i(c) moves
// monotonically, so the local derivative gives the global direction.
// Throws PrecisionError when a needed sign cannot be certified at p.
struct CmpResult {
    int dir = 0;
    std::int64_t depth = 0;
};

inline CmpResult compare_itinerary(const mp::Real& c, const std::vector<std::int8_t>& target,
                                   std::int64_t horizon, mpfr_prec_t p) {
    mp::Real xl = c.rounded_to(p), xh = c.rounded_to(2 * p);
    mp::Real cl = xl, ch = xh;
    mp::Real dl = mp::Real::of_long(1, p), dh = mp::Real::of_long(1, 2 * p);
    mp::Real twol = mp::Real::of_long(2, p), twoh = mp::Real::of_long(2, 2 * p);
    mp::Real onel = mp::Real::of_long(1, p), oneh = mp::Real::of_long(1, 2 * p);
    for (std::int64_t i = 1; i <= horizon; ++i) {
        if (i > 1) {
            dl = twol * xl * dl + onel;
            dh = twoh * xh * dh + oneh;
            xl = sqr(xl) + cl;
            xh = sqr(xh) + ch;
        }
        int sl = xl.sign(), sh = xh.sign();
        bool exact_zero = xl.is_zero() && xh.is_zero();
        if (!exact_zero) {
            if (sl != sh || mp::agreeing_digits(xl, xh) < 2)
                throw PrecisionError("compare_itinerary: sign uncertified at index " +
                                     std::to_string(i));
        }
        int s = exact_zero ? 0 : sh;
        int t = target[static_cast<size_t>(i)];
        if (s != t) {
            int need = t > s ? +1 : -1; // raw: x_i must move toward the target side
            int ds_l = dl.sign(), ds_h = dh.sign();
            if (ds_l != ds_h || dh.is_zero() || mp::agreeing_digits(dl, dh) < 2)
                throw PrecisionError("compare_itinerary: dx/dc uncertified at index " +
                                     std::to_string(i));
            return {need * ds_h, i};
        }
    }
    return {0, horizon};
}

} // namespace detail

// Bisection on c in [-2, -1] until the critical itinerary matches fib_sign
// through u(N) and the bracket is narrower than 2^-B.  Precision and horizon
// escalate on demand (PrecisionError past the cap).
inline CBracket find_c(int depth_index, int target_bits, FindCOptions opt = {}) {
    if (depth_index < 5) throw DomainError("find_c: depth index must be >= 5");
    if (target_bits < 64) throw DomainError("find_c: target bits must be >= 64");

    std::int64_t horizon = 2 * fib_u64(depth_index);
    mpfr_prec_t p = opt.start_prec;
    auto target = fib_sign_table(horizon);

    auto cmp = [&](const mp::Real& c) {
        for (;;) {
            try {
                return detail::compare_itinerary(c, target, horizon, p);
            } catch (const PrecisionError&) {
                if (2 * p > opt.max_prec) throw;
                p *= 2;
            }
        }
    };

    mpfr_prec_t wp = static_cast<mpfr_prec_t>(target_bits + 64);
    mp::Real lo = mp::Real::of_long(-2, wp), hi = mp::Real::of_long(-1, wp);
    auto rlo = cmp(lo), rhi = cmp(hi);
    if (rlo.dir == 0 || rhi.dir == 0 || rlo.dir == rhi.dir)
        throw SearchError("find_c: initial bracket does not separate the target");
    if (rlo.dir < 0 || rhi.dir > 0)
        throw SearchError("find_c: bracket endpoints ordered against the target");

    CBracket out{lo, hi};
    mp::Real width_goal = mp::Real::pow2(-target_bits);
    std::int64_t need_match = fib_u64(depth_index);
    int iters = 0;
    for (;;) {
        mp::Real mid = out.mid();
        auto rm = cmp(mid);
        if (rm.dir == 0) {
            if (2 * horizon > opt.max_horizon)
                throw PrecisionError("find_c: horizon cap reached at " + std::to_string(horizon));
            horizon *= 2;
            target = fib_sign_table(horizon);
            continue;
        }
        if (out.hi - out.lo < width_goal && rm.depth - 1 >= need_match) {
            out.match_depth = rm.depth - 1;
            break;
        }
        if (rm.dir > 0)
            out.lo = mid;
        else
            out.hi = mid;
        ++iters;
    }
    out.horizon = horizon;
    out.prec = p;
    out.iterations = iters;
    return out;
}

// ---- closest returns (section 2) ----

struct ClosestReturnsReport {
    bool ok = false;
    bool x4_negative = false;
    int first_fail_n = 0;          // 0 when the chain holds through N
    int checked_n = 0;
    int injectivity_checked_n = 0; // Remark 2 invariant verified through here
};

inline ClosestReturnsReport verify_closest_returns(const OrbitRecord& orb, int N) {
    if (orb.size() < fib_u64(N)) throw DomainError("verify_closest_returns: orbit too short");
    ClosestReturnsReport rep;
    rep.checked_n = N;
    rep.x4_negative = orb.at(4).sign() < 0;
    rep.ok = rep.x4_negative;
    if (!rep.x4_negative) rep.first_fail_n = 4; // reuses the field to flag x_4
    for (int n = 2; n <= N; ++n) {
        if (!(abs(orb.at(fib_u64(n))) < abs(orb.at(fib_u64(n - 1))))) {
            rep.ok = false;
            rep.first_fail_n = n;
            return rep;
        }
    }
    // Remark 2: f^i injective between 0 and x_{u(n)} for i <= u(n-1); with
    // endpoint images x_i and x_{u(n)+i} this is sign agreement for
    // 0 < i < u(n-1) and sign disagreement at i = u(n-1).
    int inj_max = std::min(N, 8);
    for (int n = 3; n <= inj_max; ++n) {
        std::int64_t un = fib_u64(n), um = fib_u64(n - 1);
        if (orb.size() < un + um) break;
        for (std::int64_t i = 1; i < um; ++i)
            if (orb.at(i).sign() != orb.at(un + i).sign()) {
                rep.ok = false;
                rep.first_fail_n = n;
                return rep;
            }
        if (orb.at(um).sign() == orb.at(un + um).sign()) {
            rep.ok = false;
            rep.first_fail_n = n;
            return rep;
        }
        rep.injectivity_checked_n = n;
    }
    return rep;
}

// ---- the covering M^n (Lemma 3.7) ----

struct RenderedInterval {
    CoverEntry sym;
    mp::Real lo, hi;
    std::int64_t lo_idx = 0, hi_idx = 0; // orbit indices after sorting endpoints
};

struct CoverM {
    int level = 0;
    std::vector<RenderedInterval> intervals; // sorted left to right
};

// Renders M^n from a certified orbit and validates the structure: u(n)
// pairwise disjoint intervals, each nested in a level-(n-1) interval.
// Disjointness/nesting comparisons must clear the per-endpoint certificate
// margin; failure signals precision loss or a non-Fibonacci parameter.
inline CoverM build_cover(const OrbitRecord& orb, int n) {
    std::int64_t need = cover_max_index(n);
    if (orb.size() < need)
        throw DomainError("build_cover: orbit too short, need index " + std::to_string(need));
    auto mk = [&](const CoverEntry& e) {
        RenderedInterval r{e, orb.at(e.p), orb.at(e.q), e.p, e.q};
        if (r.hi < r.lo) {
            std::swap(r.lo, r.hi);
            std::swap(r.lo_idx, r.hi_idx);
        }
        return r;
    };
    CoverM cov;
    cov.level = n;
    for (const auto& e : cover_indices(n)) cov.intervals.push_back(mk(e));
    std::sort(cov.intervals.begin(), cov.intervals.end(),
              [](const RenderedInterval& a, const RenderedInterval& b) { return a.lo < b.lo; });

    auto margin = [&](std::int64_t i) {
        // conservative absolute error bound from the certificate digit count
        double bits = orb.at(i).log2_abs() - orb.digits(i) * 3.3219280948873623;
        return bits;
    };
    for (size_t i = 0; i + 1 < cov.intervals.size(); ++i) {
        const auto& a = cov.intervals[i];
        const auto& b = cov.intervals[i + 1];
        if (!(a.hi < b.lo))
            throw StructuralError("build_cover: intervals overlap at position " +
                                  std::to_string(i) + " level " + std::to_string(n));
        double gap_bits = (b.lo - a.hi).log2_abs();
        if (gap_bits < std::max(margin(a.hi_idx), margin(b.lo_idx)) + 3)
            throw PrecisionError("build_cover: gap below certification margin at level " +
                                 std::to_string(n));
    }
    if (n >= 2) {
        CoverM parent = build_cover(orb, n - 1);
        for (const auto& iv : cov.intervals) {
            bool inside = false;
            for (const auto& pv : parent.intervals)
                if (pv.lo <= iv.lo && iv.hi <= pv.hi) {
                    inside = true;
                    break;
                }
            if (!inside)
                throw StructuralError("build_cover: interval " + iv.sym.str() +
                                      " not nested in level " + std::to_string(n - 1));
        }
    }
    return cov;
}

// ---- gap endpoints (Lemma 3.8) ----

// Partner of a complementary-gap endpoint.  The two shapes:
//   u(n_1)+...+u(n_{k-1})+u(n_k)+u(n_k+2)  <->  u(n_1)+...+u(n_{k-1})+u(n_k+1)  (k >= 2)
//   u(n)+u(n+2)  <->  u(n+1) if n even, u(n+3) if n odd.
inline BigInt gap_partner(const BigInt& m) {
    auto z = zeckendorf(m).indices;
    size_t j = z.size();
    auto sum_prefix = [&](size_t upto) {
        BigInt s = 0;
        for (size_t i = 0; i < upto; ++i) s += fib(z[i]);
        return s;
    };
    if (j == 1) {
        int q = z[0];
        if (q >= 3 && q % 2 == 1) return fib(q - 1) + fib(q + 1); // u(n+1), n = q-1 even
        if (q >= 4 && q % 2 == 0) return fib(q - 3) + fib(q - 1); // u(n+3), n = q-3 odd
        throw DomainError("gap_partner: x_" + m.str() + " is not a gap endpoint");
    }
    if (z[j - 1] == z[j - 2] + 2) {
        if (j == 2) {
            int n = z[0];
            return n % 2 == 0 ? fib(n + 1) : fib(n + 3);
        }
        return sum_prefix(j - 2) + fib(z[j - 2] + 1);
    }
    if (z[j - 1] >= z[j - 2] + 3)
        return sum_prefix(j - 1) + fib(z[j - 1] - 1) + fib(z[j - 1] + 1);
    throw DomainError("gap_partner: x_" + m.str() + " matches neither shape");
}

// ---- scaling, growth, summability, dimension (sections 4-5) ----

struct ScalingReport {
    int levels = 0;
    std::vector<double> d_log2;     // log2 d_n, index n (entry 0,1 unused/d_1)
    std::vector<double> lambda;     // lambda_n = d_n / d_{n-1}, from n = 2
    std::vector<double> ratio;      // lambda_{n+1} / lambda_n
    std::vector<double> a_estimate; // lambda_n 2^{n/3}
    double slope_log2_lambda = 0;   // least-squares over the report window
    int window_lo = 0, window_hi = 0;
    double sup_lambda = 0;
    double sup_lambda_pair = 0;     // sup lambda_n lambda_{n+1}
    std::vector<double> cover_measure_log2; // log2 |M^n|
    double cover_decay_q = 0;       // fitted q with |M^n| ~ C q^n
};

namespace detail {
inline void least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys,
                               double& slope, double& icpt) {
    double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double den = n * sxx - sx * sx;
    slope = (n * sxy - sx * sy) / den;
    icpt = (sy - slope * sx) / n;
}
} // namespace detail

inline ScalingReport scaling_report(const OrbitRecord& orb, int N, int window_lo = 0) {
    if (orb.size() < fib_u64(N)) throw DomainError("scaling_report: orbit too short");
    ScalingReport rep;
    rep.levels = N;
    rep.d_log2.assign(static_cast<size_t>(N) + 1, 0.0);
    for (int n = 1; n <= N; ++n) {
        if (orb.digits(fib_u64(n)) < 4)
            throw PrecisionError("scaling_report: d_" + std::to_string(n) + " uncertified");
        rep.d_log2[static_cast<size_t>(n)] = orb.at(fib_u64(n)).log2_abs();
    }
    rep.lambda.assign(static_cast<size_t>(N) + 1, 0.0);
    for (int n = 2; n <= N; ++n)
        rep.lambda[static_cast<size_t>(n)] =
            std::exp2(rep.d_log2[static_cast<size_t>(n)] - rep.d_log2[static_cast<size_t>(n) - 1]);
    rep.ratio.assign(static_cast<size_t>(N) + 1, 0.0);
    for (int n = 3; n <= N; ++n)
        rep.ratio[static_cast<size_t>(n)] =
            rep.lambda[static_cast<size_t>(n)] / rep.lambda[static_cast<size_t>(n) - 1];
    rep.a_estimate.assign(static_cast<size_t>(N) + 1, 0.0);
    for (int n = 2; n <= N; ++n)
        rep.a_estimate[static_cast<size_t>(n)] =
            rep.lambda[static_cast<size_t>(n)] * std::exp2(n / 3.0);

    rep.window_lo = window_lo > 0 ? window_lo : N / 2 + 1;
    rep.window_hi = N;
    std::vector<double> xs, ys;
    for (int n = rep.window_lo; n <= rep.window_hi; ++n) {
        xs.push_back(n);
        ys.push_back(std::log2(rep.lambda[static_cast<size_t>(n)]));
    }
    double icpt = 0;
    detail::least_squares_line(xs, ys, rep.slope_log2_lambda, icpt);

    rep.sup_lambda = 0;
    rep.sup_lambda_pair = 0;
    for (int n = 2; n <= N; ++n) {
        rep.sup_lambda = std::max(rep.sup_lambda, rep.lambda[static_cast<size_t>(n)]);
        if (n < N)
            rep.sup_lambda_pair =
                std::max(rep.sup_lambda_pair, rep.lambda[static_cast<size_t>(n)] *
                                                  rep.lambda[static_cast<size_t>(n) + 1]);
    }

    // |M^n| decay (Lemma 4.8)
    std::vector<double> mxs, mys;
    for (int n = 2; n <= N; ++n) {
        if (cover_max_index(n) > orb.size()) break;
        CoverM cov = build_cover(orb, n);
        double total_log2;
        {
            double acc = 0;
            for (const auto& iv : cov.intervals) acc += std::exp2((iv.hi - iv.lo).log2_abs());
            total_log2 = std::log2(acc);
        }
        rep.cover_measure_log2.push_back(total_log2);
        mxs.push_back(n);
        mys.push_back(total_log2);
    }
    if (mxs.size() >= 4) {
        double slope = 0, icpt2 = 0;
        size_t h = mxs.size() / 2;
        std::vector<double> xs2(mxs.begin() + static_cast<long>(h), mxs.end());
        std::vector<double> ys2(mys.begin() + static_cast<long>(h), mys.end());
        detail::least_squares_line(xs2, ys2, slope, icpt2);
        rep.cover_decay_q = std::exp2(slope);
    }
    return rep;
}

struct Lemma51Row {
    int n = 0;
    double r_n = 0; // |(f^{u(n)-1})'(x_1)| d_{n+1}^2 / d_n
};

struct Lemma51Report {
    std::vector<Lemma51Row> rows;
    bool chain_rule_exact = false; // Eq. (5-1) checked bit-for-bit
};

inline Lemma51Report lemma51_check(const OrbitRecord& orb, int n_lo, int n_hi) {
    if (n_lo < 2 || n_hi < n_lo) throw DomainError("lemma51_check: bad range");
    if (orb.size() < fib_u64(n_hi + 1)) throw DomainError("lemma51_check: orbit too short");
    Lemma51Report rep;
    rep.chain_rule_exact = true;
    for (int n = n_lo; n <= n_hi; ++n) {
        mp::Real D = derivative_product(orb, 1, fib_u64(n) - 1);
        double r = D.log2_abs() + 2 * orb.at(fib_u64(n + 1)).log2_abs() -
                   orb.at(fib_u64(n)).log2_abs();
        rep.rows.push_back({n, std::exp2(r)});
        if (n >= 3) {
            // (5-1): |(f^{u(n)-1})'(x_1)| =
            //   |(f^{u(n-1)-1})'(x_1)| * 2 d_{n-1} * |(f^{u(n-2)-1})'(x_{u(n-1)+1})|
            mp::Real lhs = D;
            mp::Real a = derivative_product(orb, 1, fib_u64(n - 1) - 1);
            mp::Real mid = abs(ldexp2(orb.at(fib_u64(n - 1)), 1));
            mp::Real b = derivative_product(orb, fib_u64(n - 1) + 1, fib_u64(n - 2) - 1);
            mp::Real rhs = mul_exact(mul_exact(a, mid), b);
            if (!(lhs == rhs)) rep.chain_rule_exact = false;
        }
    }
    return rep;
}

struct GrowthFit {
    double coef_weighted = 0; // coefficient of sum m s_m (expect ~ 2/3)
    double coef_count = 0;    // coefficient of sum s_m
    double coef_const = 0;
    double max_residual = 0;
    double gamma_prime_slope = 0; // slope of log2 D(u(m)) vs log2 u(m)
    int fitted_n = 0;
};

// Regress log2 |(f^n)'(x_1)| on the Zeckendorf statistics of n (Lemma 5.8).
inline GrowthFit derivative_growth_fit(const OrbitRecord& orb, std::int64_t N) {
    if (N < 100 || N > orb.size()) throw DomainError("derivative_growth_fit: bad N");
    auto logD = log2_derivative_prefix(orb, N);
    // 3-parameter normal equations
    double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double rhs[3] = {0, 0, 0};
    std::vector<std::array<double, 3>> feats(static_cast<size_t>(N) + 1);
    for (std::int64_t n = 1; n <= N; ++n) {
        auto z = zeck_indices(n);
        double wsum = 0;
        for (int idx : z) wsum += idx;
        std::array<double, 3> f{wsum, static_cast<double>(z.size()), 1.0};
        feats[static_cast<size_t>(n)] = f;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] += f[i] * f[j];
            rhs[i] += f[i] * logD[static_cast<size_t>(n)];
        }
    }
    // Gaussian elimination
    double M[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
        M[i][3] = rhs[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        std::swap(M[col], M[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = M[r][col] / M[col][col];
            for (int j = col; j < 4; ++j) M[r][j] -= f * M[col][j];
        }
    }
    GrowthFit fit;
    fit.coef_weighted = M[0][3] / M[0][0];
    fit.coef_count = M[1][3] / M[1][1];
    fit.coef_const = M[2][3] / M[2][2];
    fit.fitted_n = static_cast<int>(N);
    for (std::int64_t n = 1; n <= N; ++n) {
        const auto& f = feats[static_cast<size_t>(n)];
        double pred = fit.coef_weighted * f[0] + fit.coef_count * f[1] + fit.coef_const;
        fit.max_residual = std::max(fit.max_residual,
                                    std::fabs(pred - logD[static_cast<size_t>(n)]));
    }
    // slope of log2 D at Fibonacci moments vs log2 u(m)
    std::vector<double> xs, ys;
    for (int m = 8; fib_u64(m) <= N; ++m) {
        xs.push_back(std::log2(static_cast<double>(fib_u64(m))));
        ys.push_back(logD[static_cast<size_t>(fib_u64(m))]);
    }
    if (xs.size() >= 3) {
        double icpt = 0;
        detail::least_squares_line(xs, ys, fit.gamma_prime_slope, icpt);
    }
    return fit;
}

struct NvsReport {
    double alpha = 0;
    std::int64_t N = 0;
    double sum = 0;
    std::int64_t first_below = 0;  // first n with term < threshold (0: never)
    double threshold = 0;
    double max_term_after = 0;     // largest later term (the series oscillates)
    std::vector<std::pair<std::int64_t, double>> checkpoints;
};

// Partial sums of sum 1/|(f^n)'(x_1)|^alpha (Lemma 5.9).
inline NvsReport nvs_series(const OrbitRecord& orb, double alpha, std::int64_t N,
                            double threshold = 1e-6) {
    if (alpha <= 0) throw DomainError("nvs_series: alpha must be positive");
    if (N > orb.size()) throw DomainError("nvs_series: orbit too short");
    auto logD = log2_derivative_prefix(orb, N);
    NvsReport rep;
    rep.alpha = alpha;
    rep.N = N;
    rep.threshold = threshold;
    for (std::int64_t n = 1; n <= N; ++n) {
        double term = std::exp2(-alpha * logD[static_cast<size_t>(n)]);
        rep.sum += term;
        if (rep.first_below == 0 && term < threshold)
            rep.first_below = n;
        else if (rep.first_below != 0)
            rep.max_term_after = std::max(rep.max_term_after, term);
        if ((n & (n - 1)) == 0 || n == N) rep.checkpoints.emplace_back(n, rep.sum);
    }
    return rep;
}

struct DimensionRow {
    int level = 0;
    double estimate = 0;     // log u(n) / (-log maxlen)
    double maxlen_log2 = 0;
};

// Box-counting proxy on M^n; meaningful once intervals are shorter than 1.
inline std::vector<DimensionRow> dimension_estimate(const OrbitRecord& orb, int n_lo, int n_hi) {
    std::vector<DimensionRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        CoverM cov = build_cover(orb, n);
        double mx = -1e300;
        for (const auto& iv : cov.intervals) mx = std::max(mx, (iv.hi - iv.lo).log2_abs());
        double est = std::log(static_cast<double>(fib_u64(n))) / (-mx * std::log(2.0));
        rows.push_back({n, est, mx});
    }
    return rows;
}

inline std::vector<DimensionRow> dimension_estimate_model(const ModelParams& p, int n_lo,
                                                          int n_hi) {
    std::vector<DimensionRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        double mx = -1e300;
        for (const auto& iv : model_cover(n, p))
            mx = std::max(mx, std::log2((iv.hi - iv.lo).convert_to<double>()));
        double est = std::log(static_cast<double>(fib_u64(n))) / (-mx * std::log(2.0));
        rows.push_back({n, est, mx});
    }
    return rows;
}

} // namespace fibmap

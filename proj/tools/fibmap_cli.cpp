// Command-line front end: every analysis as a subcommand, with reproducible
// run manifests (parameters, precision schedule, SHA-256 digests of outputs).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "fibmap/class_a.hpp"
#include "fibmap/cover.hpp"
#include "fibmap/fib_arith.hpp"
#include "fibmap/kneading.hpp"
#include "fibmap/model_map.hpp"
#include "fibmap/mp_dynamics.hpp"
#include "fibmap/quad_fibonacci.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace fibmap;

namespace {

constexpr const char* kVersion = "fibmap 0.1.0";

struct RunContext {
    std::string out_dir = "out";
    bool want_json = false;
    bool want_csv = false;
    long precision_bits = 0;
    json manifest;

    RunContext() {
        manifest["version"] = kVersion;
        manifest["outputs"] = json::object();
    }

    bool csv_mode() const { return want_csv || !want_json; } // csv is the default

    static std::string sha256_hex(const std::string& data) {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
        static const char* hex = "0123456789abcdef";
        std::string out;
        for (unsigned i = 0; i < len; ++i) {
            out += hex[md[i] >> 4];
            out += hex[md[i] & 15];
        }
        return out;
    }

    void write_output(const std::string& name, const std::string& content) {
        fs::create_directories(out_dir);
        fs::path path = fs::path(out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cannot write " + path.string());
        f << content;
        manifest["outputs"][name] = sha256_hex(content);
    }

    void finish(const std::string& subcommand) {
        manifest["subcommand"] = subcommand;
        fs::create_directories(out_dir);
        fs::path path = fs::path(out_dir) / (subcommand + "_manifest.json");
        std::ofstream f(path, std::ios::binary);
        f << manifest.dump(2) << "\n";
    }
};

// Render to the certified digit count only, never the full precision.
std::string render_certified(const mp::Real& x, int digits) {
    return x.str(std::max(2, std::min(digits, 40)));
}

std::string rational_str(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

CBracket locate_c(RunContext& ctx, int depth, int bits) {
    FindCOptions opt;
    if (ctx.precision_bits > 0) opt.start_prec = ctx.precision_bits;
    CBracket br = find_c(depth, bits, opt);
    ctx.manifest["c_bracket"] = {{"lo", br.lo.str(40)},
                                 {"hi", br.hi.str(40)},
                                 {"width_log2", br.width_log2()},
                                 {"match_depth", br.match_depth},
                                 {"horizon", br.horizon},
                                 {"orbit_prec_bits", static_cast<long>(br.prec)},
                                 {"iterations", br.iterations}};
    return br;
}

// ---- subcommand bodies ----

void run_zeck(RunContext& ctx, long long m) {
    auto z = zeckendorf(BigInt(m));
    std::string pretty = std::to_string(m) + " = ";
    for (size_t i = 0; i < z.indices.size(); ++i)
        pretty += std::string(i ? "+" : "") + "u(" + std::to_string(z.indices[i]) + ")";
    std::cout << pretty << "\n";
    ctx.manifest["parameters"] = {{"m", m}};
    if (ctx.csv_mode()) {
        std::string csv = "m,indices,epsilon\n" + std::to_string(m) + ",\"" + z.str() + "\"," +
                          std::to_string(epsilon(BigInt(m))) + "\n";
        ctx.write_output("zeck.csv", csv);
    }
    if (ctx.want_json) {
        json j{{"m", m}, {"indices", z.indices}, {"epsilon", epsilon(BigInt(m))}};
        ctx.write_output("zeck.json", j.dump(2) + "\n");
    }
}

void run_knead(RunContext& ctx, long long len, const std::string& alphabet,
               const std::string& component) {
    ctx.manifest["parameters"] = {{"len", len}, {"alphabet", alphabet}, {"component", component}};
    std::string seq;
    if (alphabet == "uni") {
        auto t = fib_sign_table(len);
        for (long long i = 1; i <= len; ++i) seq += t[static_cast<size_t>(i)] > 0 ? '+' : '-';
    } else if (alphabet == "classa") {
        seq = fib_classA(component == "-" ? -1 : +1, len).str();
    } else {
        throw DomainError("knead: alphabet must be 'uni' or 'classa'");
    }
    std::cout << seq << "\n";
    if (ctx.csv_mode()) ctx.write_output("knead.csv", "sequence\n" + seq + "\n");
    if (ctx.want_json) {
        json j{{"sequence", seq}};
        ctx.write_output("knead.json", j.dump(2) + "\n");
    }
}

void run_entropy(RunContext& ctx, long long depth, double tol) {
    auto series = fib_kneading_series(2 * depth);
    auto res = entropy_from_kneading(series, depth, tol);
    std::cout.precision(12);
    std::cout << "s = " << res.growth << "\nh = " << res.entropy << "\n";
    ctx.manifest["parameters"] = {{"depth", depth}, {"tol", tol}};
    std::ostringstream csv;
    csv.precision(15);
    csv << "depth,root,root_2N,growth,entropy\n"
        << depth << "," << res.root << "," << res.root_check << "," << res.growth << ","
        << res.entropy << "\n";
    if (ctx.csv_mode()) ctx.write_output("entropy.csv", csv.str());
    if (ctx.want_json) {
        json j{{"depth", depth},
               {"root", res.root},
               {"root_2N", res.root_check},
               {"growth", res.growth},
               {"entropy", res.entropy}};
        ctx.write_output("entropy.json", j.dump(2) + "\n");
    }
}

void run_find_c(RunContext& ctx, int depth, int bits) {
    ctx.manifest["parameters"] = {{"depth", depth}, {"bits", bits}};
    CBracket br = locate_c(ctx, depth, bits);
    int digits = static_cast<int>(-br.width_log2() * 0.301) - 1;
    std::cout << "c in [" << render_certified(br.lo, digits) << ", "
              << render_certified(br.hi, digits) << "]\n"
              << "bracket width 2^" << br.width_log2() << ", itinerary matches fib signs through "
              << br.match_depth << "\n";
    std::ostringstream csv;
    csv << "lo,hi,width_log2,match_depth,horizon,iterations\n"
        << render_certified(br.lo, digits) << "," << render_certified(br.hi, digits) << ","
        << br.width_log2() << "," << br.match_depth << "," << br.horizon << "," << br.iterations
        << "\n";
    if (ctx.csv_mode()) ctx.write_output("find-c.csv", csv.str());
    if (ctx.want_json) {
        json j{{"lo", render_certified(br.lo, digits)},
               {"hi", render_certified(br.hi, digits)},
               {"width_log2", br.width_log2()},
               {"match_depth", br.match_depth},
               {"horizon", br.horizon},
               {"iterations", br.iterations}};
        ctx.write_output("find-c.json", j.dump(2) + "\n");
    }
}

void run_verify(RunContext& ctx, int depth, int bits) {
    ctx.manifest["parameters"] = {{"depth", depth}, {"bits", bits}};
    CBracket br = locate_c(ctx, depth, bits);
    mpfr_prec_t p = std::max<mpfr_prec_t>(512, ctx.precision_bits);
    auto orb = orbit_quadratic(br.mid(), fib_u64(depth) + fib_u64(depth - 1), p);
    auto rep = verify_closest_returns(orb, depth);
    std::cout << (rep.ok ? "closest returns verified" : "closest returns FAILED")
              << " through n=" << depth << "; x_4 " << (rep.x4_negative ? "< 0" : ">= 0")
              << "; injectivity checked through n=" << rep.injectivity_checked_n << "\n";
    std::ostringstream csv;
    csv << "ok,x4_negative,first_fail_n,checked_n,injectivity_checked_n\n"
        << rep.ok << "," << rep.x4_negative << "," << rep.first_fail_n << "," << rep.checked_n
        << "," << rep.injectivity_checked_n << "\n";
    if (ctx.csv_mode()) ctx.write_output("verify.csv", csv.str());
    if (ctx.want_json) {
        json j{{"ok", rep.ok},
               {"x4_negative", rep.x4_negative},
               {"first_fail_n", rep.first_fail_n},
               {"checked_n", rep.checked_n},
               {"injectivity_checked_n", rep.injectivity_checked_n}};
        ctx.write_output("verify.json", j.dump(2) + "\n");
    }
    if (!rep.ok)
        throw StructuralError("verify: closest returns failed at n=" +
                              std::to_string(rep.first_fail_n));
}

void run_model(RunContext& ctx, long long points, const std::string& t_str) {
    ModelParams par{parse_rational(t_str)};
    ctx.manifest["parameters"] = {{"points", points}, {"t", rational_str(par.t)}};
    std::ostringstream csv;
    csv << "m,y_m,phi_a,phi_b\n";
    json rows = json::array();
    for (long long m = 0; m <= points; ++m) {
        Rational y = y_value(BigInt(m), par);
        QuadSurd ph = phi(BigInt(m));
        csv << m << "," << rational_str(y) << "," << rational_str(ph.a) << ","
            << rational_str(ph.b) << "\n";
        if (ctx.want_json)
            rows.push_back({{"m", m},
                            {"y", rational_str(y)},
                            {"phi_a", rational_str(ph.a)},
                            {"phi_b", rational_str(ph.b)}});
    }
    std::cout << "wrote " << points + 1 << " rows (m, y_m, phi)\n";
    if (ctx.csv_mode()) ctx.write_output("model.csv", csv.str());
    if (ctx.want_json) ctx.write_output("model.json", rows.dump(2) + "\n");
}

void run_cover(RunContext& ctx, int level, bool model, int bits, const std::string& t_str) {
    ctx.manifest["parameters"] = {{"level", level}, {"model", model}};
    std::ostringstream csv;
    if (model) {
        ModelParams par{parse_rational(t_str)};
        csv << "label,k,p,q,lo,hi\n";
        for (const auto& iv : model_cover(level, par))
            csv << iv.sym.label << "^" << iv.sym.level << "," << iv.sym.k << "," << iv.sym.p
                << "," << iv.sym.q << "," << rational_str(iv.lo) << "," << rational_str(iv.hi)
                << "\n";
    } else {
        int depth = std::max(10, level + 2);
        CBracket br = locate_c(ctx, depth, bits);
        mpfr_prec_t p = std::max<mpfr_prec_t>(512, ctx.precision_bits);
        auto orb = orbit_quadratic(br.mid(), cover_max_index(level), p);
        auto cov = build_cover(orb, level);
        csv << "label,k,p,q,lo,hi,lo_digits,hi_digits\n";
        for (const auto& iv : cov.intervals)
            csv << iv.sym.label << "^" << iv.sym.level << "," << iv.sym.k << "," << iv.lo_idx
                << "," << iv.hi_idx << "," << render_certified(iv.lo, orb.digits(iv.lo_idx))
                << "," << render_certified(iv.hi, orb.digits(iv.hi_idx)) << ","
                << orb.digits(iv.lo_idx) << "," << orb.digits(iv.hi_idx) << "\n";
    }
    std::cout << "M^" << level << ": " << fib_u64(level) << " intervals\n";
    if (ctx.csv_mode()) ctx.write_output("cover.csv", csv.str());
    if (ctx.want_json) ctx.write_output("cover.json", json{{"level", level}}.dump(2) + "\n");
}

void run_scaling(RunContext& ctx, int levels, int bits, int window) {
    ctx.manifest["parameters"] = {{"levels", levels}, {"bits", bits}, {"window", window}};
    CBracket br = locate_c(ctx, levels + 2, bits);
    mpfr_prec_t p = std::max<mpfr_prec_t>(768, ctx.precision_bits);
    auto orb = orbit_quadratic(br.mid(), fib_u64(levels) + 2, p);
    auto rep = scaling_report(orb, levels, window);
    std::ostringstream csv;
    csv.precision(12);
    csv << "n,log2_d,lambda,ratio,a_estimate\n";
    for (int n = 1; n <= levels; ++n) {
        csv << n << "," << rep.d_log2[static_cast<size_t>(n)] << ",";
        if (n >= 2) csv << rep.lambda[static_cast<size_t>(n)];
        csv << ",";
        if (n >= 3) csv << rep.ratio[static_cast<size_t>(n)];
        csv << ",";
        if (n >= 2) csv << rep.a_estimate[static_cast<size_t>(n)];
        csv << "\n";
    }
    std::cout.precision(10);
    std::cout << "slope of log2 lambda_n over n=" << rep.window_lo << ".." << rep.window_hi
              << ": " << rep.slope_log2_lambda << "  (2^(-1/3) law: -0.3333)\n"
              << "sup lambda_n = " << rep.sup_lambda
              << ", sup lambda_n lambda_{n+1} = " << rep.sup_lambda_pair
              << ", |M^n| decay q = " << rep.cover_decay_q << "\n";
    if (ctx.csv_mode()) ctx.write_output("scaling.csv", csv.str());
    json j{{"slope_log2_lambda", rep.slope_log2_lambda},
           {"window", {rep.window_lo, rep.window_hi}},
           {"sup_lambda", rep.sup_lambda},
           {"sup_lambda_pair", rep.sup_lambda_pair},
           {"cover_decay_q", rep.cover_decay_q},
           {"cover_measure_log2", rep.cover_measure_log2}};
    ctx.manifest["summary"] = j;
    if (ctx.want_json) ctx.write_output("scaling.json", j.dump(2) + "\n");
}

void run_growth(RunContext& ctx, long long count, int bits) {
    ctx.manifest["parameters"] = {{"count", count}, {"bits", bits}};
    int depth = 10;
    while (fib_u64(depth) < count) ++depth;
    CBracket br = locate_c(ctx, depth, bits);
    mpfr_prec_t p = std::max<mpfr_prec_t>(768, ctx.precision_bits);
    auto orb = orbit_quadratic(br.mid(), count, p);
    auto fit = derivative_growth_fit(orb, count);
    std::cout.precision(10);
    std::cout << "log2 |(f^n)'(x_1)| ~ " << fit.coef_weighted << " * sum(m s_m) + "
              << fit.coef_count << " * sum(s_m) + " << fit.coef_const << "\n"
              << "max residual " << fit.max_residual << " bits; Fibonacci-moment slope "
              << fit.gamma_prime_slope << " (2log2/(3log phi) = 0.9603)\n";
    json j{{"coef_weighted", fit.coef_weighted},
           {"coef_count", fit.coef_count},
           {"coef_const", fit.coef_const},
           {"max_residual", fit.max_residual},
           {"gamma_prime_slope", fit.gamma_prime_slope},
           {"fitted_n", fit.fitted_n}};
    ctx.manifest["summary"] = j;
    if (ctx.csv_mode()) {
        std::ostringstream csv;
        csv.precision(12);
        csv << "coef_weighted,coef_count,coef_const,max_residual,gamma_prime_slope,fitted_n\n"
            << fit.coef_weighted << "," << fit.coef_count << "," << fit.coef_const << ","
            << fit.max_residual << "," << fit.gamma_prime_slope << "," << fit.fitted_n << "\n";
        ctx.write_output("growth.csv", csv.str());
    }
    if (ctx.want_json) ctx.write_output("growth.json", j.dump(2) + "\n");
}

void run_series(RunContext& ctx, double alpha, long long count, int bits, double threshold) {
    ctx.manifest["parameters"] = {{"alpha", alpha},
                                  {"count", count},
                                  {"bits", bits},
                                  {"threshold", threshold}};
    int depth = 10;
    while (fib_u64(depth) < count) ++depth;
    CBracket br = locate_c(ctx, depth, bits);
    mpfr_prec_t p = std::max<mpfr_prec_t>(768, ctx.precision_bits);
    auto orb = orbit_quadratic(br.mid(), count, p);
    auto rep = nvs_series(orb, alpha, count, threshold);
    std::cout.precision(10);
    std::cout << "S_" << count << " = " << rep.sum << "; first increment below " << threshold
              << " at n = " << rep.first_below << "; max later increment " << rep.max_term_after
              << "\n";
    std::ostringstream csv;
    csv.precision(12);
    csv << "n,partial_sum\n";
    for (auto& [n, s] : rep.checkpoints) csv << n << "," << s << "\n";
    if (ctx.csv_mode()) ctx.write_output("series.csv", csv.str());
    json j{{"alpha", alpha},
           {"sum", rep.sum},
           {"first_below", rep.first_below},
           {"threshold", threshold},
           {"max_term_after", rep.max_term_after}};
    ctx.manifest["summary"] = j;
    if (ctx.want_json) ctx.write_output("series.json", j.dump(2) + "\n");
}

void run_dimension(RunContext& ctx, int levels, bool model, int bits) {
    ctx.manifest["parameters"] = {{"levels", levels}, {"model", model}};
    std::ostringstream csv;
    csv.precision(10);
    csv << "n,estimate,maxlen_log2\n";
    if (model) {
        for (const auto& row : dimension_estimate_model(ModelParams{}, 4, levels))
            csv << row.level << "," << row.estimate << "," << row.maxlen_log2 << "\n";
    } else {
        CBracket br = locate_c(ctx, levels + 2, bits);
        mpfr_prec_t p = std::max<mpfr_prec_t>(768, ctx.precision_bits);
        auto orb = orbit_quadratic(br.mid(), cover_max_index(levels), p);
        for (const auto& row : dimension_estimate(orb, 4, levels))
            csv << row.level << "," << row.estimate << "," << row.maxlen_log2 << "\n";
    }
    std::cout << csv.str();
    if (ctx.csv_mode()) ctx.write_output("dimension.csv", csv.str());
    if (ctx.want_json)
        ctx.write_output("dimension.json", json{{"levels", levels}}.dump(2) + "\n");
}

json map_to_json(const ClassAMap& m, int digits) {
    return json{{"J", {m.Jdom().lo.str(digits), m.Jdom().hi.str(digits)}},
                {"T", {m.Tdom().lo.str(digits), m.Tdom().hi.str(digits)}},
                {"quad",
                 {{"q", m.quad_coeff().str(digits)},
                  {"c0", m.quad_c0().str(digits)},
                  {"x0", m.critical().str(digits)}}},
                {"affine",
                 {{"slope", m.lin_slope().str(digits)}, {"offset", m.lin_offset().str(digits)}}},
                {"component", m.component()}};
}

void run_example(RunContext& ctx, double c, double lam, double v, long prec) {
    ctx.manifest["parameters"] = {{"c", c}, {"lam", lam}, {"v", v}, {"prec", prec}};
    auto m = example21(mp::Real::of_double(c, prec), mp::Real::of_double(lam, prec),
                       mp::Real::of_double(v, prec), prec);
    json j = map_to_json(m, 24);
    std::cout << j.dump(2) << "\n";
    ctx.write_output("example.json", j.dump(2) + "\n");
    if (ctx.csv_mode())
        ctx.write_output("example.csv",
                         "component,J_lo,J_hi,T_lo,T_hi\n" + std::to_string(m.component()) +
                             "," + m.Jdom().lo.str(20) + "," + m.Jdom().hi.str(20) + "," +
                             m.Tdom().lo.str(20) + "," + m.Tdom().hi.str(20) + "\n");
}

void run_tune(RunContext& ctx, double c, double lam, int depth, long prec) {
    ctx.manifest["parameters"] = {{"c", c}, {"lam", lam}, {"depth", depth}};
    mpfr_prec_t p = prec > 0 ? prec : 256;
    VBracket vb = tune_v(mp::Real::of_double(c, p), mp::Real::of_double(lam, p), depth, p);
    int digits = 30;
    std::cout << "v in [" << vb.lo.str(digits) << ", " << vb.hi.str(digits)
              << "], kneading matches fib^+ through " << vb.match_depth << "\n";
    json j{{"lo", vb.lo.str(digits)},
           {"hi", vb.hi.str(digits)},
           {"match_depth", vb.match_depth},
           {"iterations", vb.iterations},
           {"prec_bits", static_cast<long>(vb.prec)}};
    ctx.manifest["summary"] = j;
    if (ctx.csv_mode())
        ctx.write_output("tune.csv", "lo,hi,match_depth,iterations\n" + vb.lo.str(digits) + "," +
                                         vb.hi.str(digits) + "," +
                                         std::to_string(vb.match_depth) + "," +
                                         std::to_string(vb.iterations) + "\n");
    if (ctx.want_json) ctx.write_output("tune.json", j.dump(2) + "\n");
}

void run_renorm(RunContext& ctx, double c, double lam, int depth, int levels, long prec) {
    ctx.manifest["parameters"] = {{"c", c}, {"lam", lam}, {"depth", depth}, {"levels", levels}};
    mpfr_prec_t p = prec > 0 ? prec : 320;
    mp::Real C = mp::Real::of_double(c, p), L = mp::Real::of_double(lam, p);
    VBracket vb = tune_v(C, L, depth, p, 64);
    ClassAMap m = example21(C, L, vb.mid(), 2 * p);
    ClassASystem sys(m);
    json tower = json::array();
    for (int lvl = 1; lvl <= levels; ++lvl) {
        RenormLevel rl = renormalize_numeric(sys, p);
        tower.push_back({{"level", lvl},
                         {"component", rl.component},
                         {"iter_T", rl.iter_T},
                         {"iter_J", rl.iter_J},
                         {"T", {rl.T.lo.str(20), rl.T.hi.str(20)}},
                         {"J", {rl.J.lo.str(20), rl.J.hi.str(20)}},
                         {"rescale",
                          {{"scale", rl.rescale.scale.str(20)},
                           {"offset", rl.rescale.offset.str(20)}}},
                         {"inclusions_61_62", {rl.incl_T_lower, rl.incl_T_upper, rl.incl_J}}});
        std::cout << "level " << lvl << ": f_" << lvl << "|T = f^" << rl.iter_T << ", f_" << lvl
                  << "|J = f^" << rl.iter_J << ", component " << (rl.component > 0 ? "+" : "-")
                  << ", inclusions (6-1)/(6-2) ok\n";
    }
    json j{{"base", map_to_json(m, 24)}, {"tower", tower}};
    ctx.write_output("renorm.json", j.dump(2) + "\n");
    if (ctx.csv_mode()) {
        std::ostringstream csv;
        csv << "level,component,iter_T,iter_J,T_lo,T_hi,J_lo,J_hi\n";
        for (int lvl = 1; lvl <= levels; ++lvl) {
            const auto& rl = sys.level(lvl);
            csv << lvl << "," << rl.component << "," << rl.iter_T << "," << rl.iter_J << ","
                << rl.T.lo.str(20) << "," << rl.T.hi.str(20) << "," << rl.J.lo.str(20) << ","
                << rl.J.hi.str(20) << "\n";
        }
        ctx.write_output("renorm.csv", csv.str());
    }
}

void run_geometry(RunContext& ctx, const std::string& c_list, int depth, long prec) {
    ctx.manifest["parameters"] = {{"c_list", c_list}, {"depth", depth}};
    std::vector<double> cs;
    std::stringstream ss(c_list);
    std::string item;
    while (std::getline(ss, item, ',')) cs.push_back(std::stod(item));
    auto rows = geometry_experiment(cs, depth, prec > 0 ? prec : 256);
    std::ostringstream csv;
    csv.precision(10);
    csv << "c,lam,v,lambda_first,a_estimate,a_renormalized,a_ratio,level\n";
    std::cout.precision(8);
    for (const auto& r : rows) {
        csv << r.c << "," << r.lam << "," << r.v << "," << r.lambda_first << "," << r.a_estimate
            << "," << r.a_renormalized << "," << r.a_ratio << "," << r.level_K << "\n";
        std::cout << "c=" << r.c << ": lambda_first=" << r.lambda_first << " a=" << r.a_estimate
                  << " a_ratio=" << r.a_ratio << " (2^(-1/3)=0.7937)\n";
    }
    if (ctx.csv_mode()) ctx.write_output("geometry.csv", csv.str());
    if (ctx.want_json) {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"c", r.c},
                           {"lam", r.lam},
                           {"v", r.v},
                           {"lambda_first", r.lambda_first},
                           {"a_estimate", r.a_estimate},
                           {"a_renormalized", r.a_renormalized},
                           {"a_ratio", r.a_ratio},
                           {"level", r.level_K}});
        ctx.write_output("geometry.json", arr.dump(2) + "\n");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fibonacci unimodal map: combinatorics, model geometry, scaling laws"};
    app.require_subcommand(1);

    RunContext ctx;
    bool seedless = false;
    app.add_option("--out", ctx.out_dir, "output directory")->capture_default_str();
    app.add_flag("--json", ctx.want_json, "emit JSON outputs");
    app.add_flag("--csv", ctx.want_csv, "emit CSV outputs (default)");
    app.add_option("--precision-bits", ctx.precision_bits, "starting working precision");
    app.add_flag("--seedless", seedless,
                 "reserved: every computation is deterministic, no RNG exists");

    long long zeck_m = 0;
    auto* sc_zeck = app.add_subcommand("zeck", "Zeckendorf decomposition of an integer");
    sc_zeck->add_option("m", zeck_m, "positive integer")->required();

    long long knead_len = 100;
    std::string knead_alpha = "uni", knead_comp = "+";
    auto* sc_knead = app.add_subcommand("knead", "Fibonacci kneading sequences");
    sc_knead->add_option("--len", knead_len, "length");
    sc_knead->add_option("--alphabet", knead_alpha, "uni (+-) or classa (J/P/M)");
    sc_knead->add_option("--component", knead_comp, "+ or - (classa only)");

    long long ent_depth = 800;
    double ent_tol = 1e-7;
    auto* sc_entropy = app.add_subcommand("entropy", "growth rate from the kneading determinant");
    sc_entropy->add_option("--depth", ent_depth, "truncation N (series computed to 2N)");
    sc_entropy->add_option("--tol", ent_tol, "N vs 2N stabilization tolerance");

    int fc_depth = 16, fc_bits = 80;
    auto* sc_findc = app.add_subcommand("find-c", "locate the Fibonacci parameter by bisection");
    sc_findc->add_option("--depth", fc_depth, "match fib signs through u(depth)");
    sc_findc->add_option("--bits", fc_bits, "bracket width 2^-bits");

    int ver_depth = 14, ver_bits = 160;
    auto* sc_verify = app.add_subcommand("verify", "closest-return inequalities at the parameter");
    sc_verify->add_option("--depth", ver_depth, "check through u(depth)");
    sc_verify->add_option("--bits", ver_bits, "locate bracket width");

    long long model_points = 100;
    std::string model_t = "1/2";
    auto* sc_model = app.add_subcommand("model", "exact model-map table (m, y_m, phi)");
    sc_model->add_option("--points", model_points, "rows 0..points");
    sc_model->add_option("--t", model_t, "parameter t as p/q");

    int cov_level = 8, cov_bits = 160;
    bool cov_model = false;
    auto* sc_cover = app.add_subcommand("cover", "the level-n covering M^n");
    sc_cover->add_option("--level", cov_level, "level n");
    sc_cover->add_flag("--model", cov_model, "use the exact model map instead");
    sc_cover->add_option("--bits", cov_bits, "locate bracket width (quadratic)");
    sc_cover->add_option("--t", model_t, "model parameter t as p/q");

    int scl_levels = 12, scl_bits = 200, scl_window = 0;
    auto* sc_scaling = app.add_subcommand("scaling", "d_n, lambda_n and the 2^(-1/3) law");
    sc_scaling->add_option("--levels", scl_levels, "levels n to compute");
    sc_scaling->add_option("--bits", scl_bits, "locate bracket width");
    sc_scaling->add_option("--window", scl_window, "regression window start (default top half)");

    long long gr_count = 2000;
    int gr_bits = 200;
    auto* sc_growth = app.add_subcommand("growth", "derivative growth fit over Zeckendorf digits");
    sc_growth->add_option("--count", gr_count, "orbit length");
    sc_growth->add_option("--bits", gr_bits, "locate bracket width");

    double se_alpha = 0.5, se_threshold = 1e-6;
    long long se_count = 10000;
    int se_bits = 200;
    auto* sc_series = app.add_subcommand("series", "Nowicki-van Strien partial sums");
    sc_series->add_option("--alpha", se_alpha, "exponent alpha > 0");
    sc_series->add_option("--count", se_count, "terms");
    sc_series->add_option("--bits", se_bits, "locate bracket width");
    sc_series->add_option("--threshold", se_threshold, "increment threshold");

    int dim_levels = 12, dim_bits = 200;
    bool dim_model = false;
    auto* sc_dim = app.add_subcommand("dimension", "box-counting dimension trend on M^n");
    sc_dim->add_option("--levels", dim_levels, "top level");
    sc_dim->add_flag("--model", dim_model, "estimate on the model map instead");
    sc_dim->add_option("--bits", dim_bits, "locate bracket width (quadratic)");

    double ex_c = 10, ex_lam = 0.05, ex_v = 0.02;
    long ex_prec = 384;
    auto* sc_example = app.add_subcommand("example", "the explicit two-branch family");
    sc_example->add_option("--c", ex_c, "c parameter");
    sc_example->add_option("--lam", ex_lam, "lambda parameter");
    sc_example->add_option("--v", ex_v, "v in [0, lam]");
    sc_example->add_option("--prec", ex_prec, "construction precision bits");

    double tu_c = 10, tu_lam = 0.05;
    int tu_depth = 10;
    long tu_prec = 256;
    auto* sc_tune = app.add_subcommand("tune", "tune v to the Fibonacci kneading");
    sc_tune->add_option("--c", tu_c, "c parameter");
    sc_tune->add_option("--lam", tu_lam, "lambda parameter");
    sc_tune->add_option("--depth", tu_depth, "match fib^+ through u(depth)");
    sc_tune->add_option("--prec", tu_prec, "starting precision bits");

    double rn_c = 10, rn_lam = 0.05;
    int rn_depth = 10, rn_levels = 3;
    long rn_prec = 320;
    auto* sc_renorm = app.add_subcommand("renorm", "numeric renormalization tower");
    sc_renorm->add_option("--c", rn_c, "c parameter");
    sc_renorm->add_option("--lam", rn_lam, "lambda parameter");
    sc_renorm->add_option("--depth", rn_depth, "tuning depth");
    sc_renorm->add_option("--levels", rn_levels, "tower levels");
    sc_renorm->add_option("--prec", rn_prec, "working precision bits");

    std::string geo_cs = "10,20,40";
    int geo_depth = 12;
    long geo_prec = 256;
    auto* sc_geometry = app.add_subcommand("geometry", "geometry variation across the family");
    sc_geometry->add_option("--c-list", geo_cs, "comma-separated c values");
    sc_geometry->add_option("--depth", geo_depth, "tuning depth index");
    sc_geometry->add_option("--prec", geo_prec, "working precision bits");

    CLI11_PARSE(app, argc, argv);

    if (seedless) {
        std::cerr << "error: --seedless is reserved; all computations are deterministic and no "
                     "randomness exists to seed\n";
        return 2;
    }

    try {
        if (*sc_zeck) {
            run_zeck(ctx, zeck_m);
            ctx.finish("zeck");
        } else if (*sc_knead) {
            run_knead(ctx, knead_len, knead_alpha, knead_comp);
            ctx.finish("knead");
        } else if (*sc_entropy) {
            run_entropy(ctx, ent_depth, ent_tol);
            ctx.finish("entropy");
        } else if (*sc_findc) {
            run_find_c(ctx, fc_depth, fc_bits);
            ctx.finish("find-c");
        } else if (*sc_verify) {
            run_verify(ctx, ver_depth, ver_bits);
            ctx.finish("verify");
        } else if (*sc_model) {
            run_model(ctx, model_points, model_t);
            ctx.finish("model");
        } else if (*sc_cover) {
            run_cover(ctx, cov_level, cov_model, cov_bits, model_t);
            ctx.finish("cover");
        } else if (*sc_scaling) {
            run_scaling(ctx, scl_levels, scl_bits, scl_window);
            ctx.finish("scaling");
        } else if (*sc_growth) {
            run_growth(ctx, gr_count, gr_bits);
            ctx.finish("growth");
        } else if (*sc_series) {
            run_series(ctx, se_alpha, se_count, se_bits, se_threshold);
            ctx.finish("series");
        } else if (*sc_dim) {
            run_dimension(ctx, dim_levels, dim_model, dim_bits);
            ctx.finish("dimension");
        } else if (*sc_example) {
            run_example(ctx, ex_c, ex_lam, ex_v, ex_prec);
            ctx.finish("example");
        } else if (*sc_tune) {
            run_tune(ctx, tu_c, tu_lam, tu_depth, tu_prec);
            ctx.finish("tune");
        } else if (*sc_renorm) {
            run_renorm(ctx, rn_c, rn_lam, rn_depth, rn_levels, rn_prec);
            ctx.finish("renorm");
        } else if (*sc_geometry) {
            run_geometry(ctx, geo_cs, geo_depth, geo_prec);
            ctx.finish("geometry");
        }
    } catch (const DomainError& e) {
        std::cerr << "DomainError: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "PrecisionError: " << e.what() << "\n";
        return 3;
    } catch (const SearchError& e) {
        std::cerr << "SearchError: " << e.what() << "\n";
        return 4;
    } catch (const ShapeError& e) {
        std::cerr << "ShapeError: " << e.what() << "\n";
        return 5;
    } catch (const StructuralError& e) {
        std::cerr << "StructuralError: " << e.what() << "\n";
        return 6;
    } catch (const DepthError& e) {
        std::cerr << "DepthError: " << e.what() << "\n";
        return 7;
    } catch (const RepresentationError& e) {
        std::cerr << "RepresentationError: " << e.what() << "\n";
        return 8;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#ifndef FEIGEN_REPORTING_HPP
#define FEIGEN_REPORTING_HPP

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "certifier.hpp"

namespace feigen
{

inline constexpr int report_schema_version = 1;

struct RunConfig
{
    std::size_t degree = 20;
    unsigned digits = 30;
    std::string rho = "1e-8";
    std::string rho_delta; // empty: 100 rho
    std::string rho_gamma; // empty: 100 rho
    std::size_t boundary_rectangles = 64;
    unsigned workers = 1;
    std::set<ProblemKind> targets = {ProblemKind::fixed_point, ProblemKind::delta_eigen, ProblemKind::gamma_eigen};
    std::string output_dir;
    std::string load_fixed_point; // checkpoint of G0 (ball text), replaces the bootstrap
};

// Largest representable not exceeding the decimal string; must be positive.
inline Real parse_rho(const std::string &s, const RoundingContext &ctx)
{
    Real r = [&] {
        try {
            return Real::parse(s, ctx.bits(), MPFR_RNDD);
        } catch (const ParseError &) {
            throw ConfigError("rho '" + s + "' is not a number");
        }
    }();
    if (!(r.sign() > 0) || !r.is_finite()) {
        throw ConfigError("rho '" + s + "' is not a positive representable");
    }
    return r;
}

inline std::string default_eigen_rho(const std::string &rho)
{
    return "100 * " + rho;
}

inline Real eigen_rho(const std::string &explicit_rho, const std::string &rho, const RoundingContext &ctx)
{
    if (!explicit_rho.empty()) {
        return parse_rho(explicit_rho, ctx);
    }
    return mul(parse_rho(rho, ctx), ctx.real(100L), MPFR_RNDD);
}

inline void validate(const RunConfig &cfg)
{
    if (cfg.degree < 4) {
        throw ConfigError("degree N must be >= 4");
    }
    if (cfg.digits < 15) {
        throw ConfigError("precision P must be >= 15 digits");
    }
    if (cfg.boundary_rectangles < 4) {
        throw ConfigError("boundary rectangles M must be >= 4");
    }
    if (cfg.boundary_rectangles % 4 != 0) {
        throw ConfigError("boundary rectangles M must be a multiple of 4");
    }
    if (cfg.workers == 0) {
        throw ConfigError("workers must be >= 1");
    }
    if (cfg.targets.empty()) {
        throw ConfigError("no targets requested");
    }
    if (!cfg.targets.count(ProblemKind::fixed_point)) {
        throw ConfigError("delta and gamma certification need the fixed-point certificate in the same run");
    }
    const RoundingContext ctx = RoundingContext::from_digits(cfg.digits);
    parse_rho(cfg.rho, ctx);
    eigen_rho(cfg.rho_delta, cfg.rho, ctx);
    eigen_rho(cfg.rho_gamma, cfg.rho, ctx);
}

inline std::string sha256_hex(const std::string &data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 failed");
    }
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return os.str();
}

struct CertifiedDigits
{
    std::string text;   // sign, integer part, point, guaranteed fraction digits
    std::size_t count;  // significant digits in text
};

namespace detail
{

struct DecimalDigits
{
    bool negative;
    long exponent;      // value = 0.d1 d2 ... x 10^exponent
    std::string digits; // without leading zeros, unless the value is zero
};

inline DecimalDigits decimal_digits(const Real &x, std::size_t n, mpfr_rnd_t rnd)
{
    mpfr_exp_t e = 0;
    char *s = mpfr_get_str(nullptr, &e, 10, n, x.get(), rnd);
    std::string str(s);
    mpfr_free_str(s);
    DecimalDigits d{false, static_cast<long>(e), str};
    if (!str.empty() && str[0] == '-') {
        d.negative = true;
        d.digits = str.substr(1);
    }
    return d;
}

} // namespace detail

/**
 * Longest decimal prefix shared by every member of x. Both endpoints are
 * converted outward (lo down, hi up) with more digits than the precision
 * carries; members lie between the two strings, so their common prefix is
 * guaranteed. The result is a truncation: further digits of any member
 * extend it.
 */
inline CertifiedDigits certified_digits(const Interval &x)
{
    if (x.contains_zero()) {
        return {"0", 0};
    }
    const std::size_t n = static_cast<std::size_t>(std::ceil(x.lo().prec() * 0.30103)) + 3;
    const auto lo = detail::decimal_digits(x.lo(), n, MPFR_RNDD);
    const auto hi = detail::decimal_digits(x.hi(), n, MPFR_RNDU);
    std::size_t k = 0;
    if (lo.negative == hi.negative && lo.exponent == hi.exponent) {
        while (k < lo.digits.size() && k < hi.digits.size() && lo.digits[k] == hi.digits[k]) {
            ++k;
        }
    }
    const std::string prefix = lo.digits.substr(0, k);
    std::string text = lo.negative ? "-" : "";
    const long e = lo.exponent;
    if (k == 0) {
        return {text + "0", 0};
    }
    if (e <= 0) {
        text += "0." + std::string(static_cast<std::size_t>(-e), '0') + prefix;
    } else if (static_cast<std::size_t>(e) >= k) {
        // Integer digits are not all guaranteed; nothing sensible to print beyond the prefix.
        text += prefix + std::string(static_cast<std::size_t>(e) - k, '?');
    } else {
        text += prefix.substr(0, static_cast<std::size_t>(e)) + "." + prefix.substr(static_cast<std::size_t>(e));
    }
    return {text, k};
}

/**
 * Digits in groups of ten after the point, five groups per line:
 *   -0.
 *   3995352805 2313448985 ...
 */
inline std::string grouped_digits(const CertifiedDigits &d)
{
    const auto dot = d.text.find('.');
    if (dot == std::string::npos) {
        return d.text + "\n";
    }
    std::ostringstream os;
    os << d.text.substr(0, dot + 1) << '\n';
    const std::string frac = d.text.substr(dot + 1);
    for (std::size_t i = 0; i < frac.size(); i += 10) {
        os << frac.substr(i, 10);
        const bool end_line = (i / 10) % 5 == 4 || i + 10 >= frac.size();
        os << (end_line ? '\n' : ' ');
    }
    return os.str();
}

inline std::string to_string(const CertifiedDigits &d)
{
    return d.text + " (" + std::to_string(d.count) + " digits)";
}

struct StageFailure
{
    std::string stage;
    std::string message;
};

struct PipelineResult
{
    RunConfig config;
    DenseVector g0;
    std::optional<Eigenpair> delta_pair;
    std::optional<Eigenpair> gamma_pair;
    NewtonReport fixed_point_newton;
    std::optional<DomainExtensionReport> domain_extension;
    std::vector<Certificate> certificates;
    std::optional<CertifiedFunctions> functions;
    std::map<std::string, CertifiedDigits> digits;
    std::map<std::string, std::string> checksums;
    std::optional<StageFailure> failure;

    const Certificate *certificate(ProblemKind k) const
    {
        for (const auto &c : certificates) {
            if (c.kind == k) {
                return &c;
            }
        }
        return nullptr;
    }
};

inline void write_file(const std::string &path, const std::string &text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot write " + path);
    }
    f << text;
}

inline std::string read_file(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot read " + path);
    }
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

inline std::string config_text(const RunConfig &c)
{
    std::ostringstream os;
    os << "N=" << c.degree << " P=" << c.digits << " rho=" << c.rho << " rho_delta=" << c.rho_delta
       << " rho_gamma=" << c.rho_gamma << " M=" << c.boundary_rectangles << " targets=";
    for (auto k : c.targets) {
        os << to_string(k) << ',';
    }
    return os.str();
}

/**
 * approx bootstrap (or checkpoint) -> domain extension -> fixed point ->
 * delta -> gamma. The eigen problems take G over the fixed-point ball,
 * shrunk to the a-posteriori radius of its certificate. A failing stage stops
 * the run; the partial result names the stage.
 */
inline PipelineResult run_pipeline(const RunConfig &cfg)
{
    validate(cfg);
    PipelineResult out;
    out.config = cfg;
    const RoundingContext ctx = RoundingContext::from_digits(cfg.digits);
    const Disc disc = Disc::standard(ctx);
    std::string stage = "approx";
    try {
        out.checksums["config"] = sha256_hex(config_text(cfg));
        if (!cfg.load_fixed_point.empty()) {
            const std::string text = read_file(cfg.load_fixed_point);
            out.checksums["fixed_point_checkpoint"] = sha256_hex(text);
            const FunctionBall loaded = ball_from_text(text);
            if (loaded.degree() != cfg.degree) {
                throw ConfigError("checkpoint degree " + std::to_string(loaded.degree()) + " != N");
            }
            out.g0 = loaded.midpoints();
            for (auto &x : out.g0) {
                mpfr_prec_round(x.get(), ctx.bits(), MPFR_RNDN);
            }
        } else {
            out.g0 = approx_fixed_point(cfg.degree, cfg.digits, classical_seed_monomials(), &out.fixed_point_newton);
        }
        const FunctionBall g0 = FunctionBall::from_reals(ctx, disc, out.g0);
        out.checksums["G0"] = sha256_hex(to_text(g0));
        const Real rho = parse_rho(cfg.rho, ctx);

        stage = "domain_extension";
        out.domain_extension = check_domain_extension(inflate(g0, rho), cfg.boundary_rectangles, cfg.workers);

        stage = "fixed_point";
        const LinearMap lam = build_lambda(ProblemKind::fixed_point, approx_jacobian(ProblemKind::fixed_point, out.g0));
        CertificateConfig cc{cfg.degree, ctx.bits(), cfg.boundary_rectangles, cfg.workers, out.checksums};
        cc.checksums["lambda"] = sha256_hex(to_text(lam));
        out.certificates.push_back(certify(Problem::fixed_point(), g0, lam, rho, cfg.workers, cc));
        const Certificate &fp = out.certificates.back();
        const FunctionBall gball = inflate(g0, fp.radius);
        CertifiedFunctions fns{gball, std::nullopt, std::nullopt, evaluate(gball, Rectangle::point(ctx, 1.0)),
                               std::nullopt, std::nullopt};
        out.functions = fns;
        out.digits["a"] = certified_digits(fp.enclosures.at("a"));
        out.digits["alpha"] = certified_digits(fp.enclosures.at("alpha"));

        std::shared_ptr<const SharedEvaluations> shared;
        for (ProblemKind kind : {ProblemKind::delta_eigen, ProblemKind::gamma_eigen}) {
            if (!cfg.targets.count(kind)) {
                continue;
            }
            const bool is_delta = kind == ProblemKind::delta_eigen;
            stage = is_delta ? "delta" : "gamma";
            if (!shared) {
                shared = std::make_shared<const SharedEvaluations>(precompute_shared(gball));
            }
            Eigenpair ep = approx_eigenpair(kind, out.g0, cfg.digits);
            const FunctionBall x0 = FunctionBall::from_reals(ctx, disc, ep.vector);
            const LinearMap lk = build_lambda(kind, approx_jacobian(kind, out.g0, &ep.vector), &ep.value);
            const Real r = eigen_rho(is_delta ? cfg.rho_delta : cfg.rho_gamma, cfg.rho, ctx);
            CertificateConfig ck = cc;
            ck.checksums[is_delta ? "V0" : "W0"] = sha256_hex(to_text(x0));
            ck.checksums["lambda"] = sha256_hex(to_text(lk));
            out.certificates.push_back(certify(Problem::eigen(kind, shared), x0, lk, r, cfg.workers, ck));
            const Certificate &c = out.certificates.back();
            const FunctionBall ball = inflate(x0, c.radius);
            const std::string name = is_delta ? "delta" : "gamma";
            if (is_delta) {
                out.functions->V = ball;
                out.functions->delta = coefficient(ball, 0);
                out.delta_pair = std::move(ep);
            } else {
                out.functions->W = ball;
                out.functions->gamma = coefficient(ball, 0);
                out.gamma_pair = std::move(ep);
            }
            out.digits[name] = certified_digits(c.enclosures.at(name));
        }
    } catch (const CertificationFailed &e) {
        out.certificates.push_back(e.certificate());
        out.failure = StageFailure{stage, e.what()};
    } catch (const std::exception &e) {
        out.failure = StageFailure{stage, e.what()};
    }
    return out;
}

inline nlohmann::json to_json(const PipelineResult &r)
{
    nlohmann::json j;
    j["schema"] = "feigen-report";
    j["schema_version"] = report_schema_version;
    const RunConfig &c = r.config;
    nlohmann::json targets = nlohmann::json::array();
    for (auto k : c.targets) {
        targets.push_back(to_string(k));
    }
    j["config"] = {{"degree", c.degree},
                   {"digits", c.digits},
                   {"rho", c.rho},
                   {"rho_delta", c.rho_delta.empty() ? default_eigen_rho(c.rho) : c.rho_delta},
                   {"rho_gamma", c.rho_gamma.empty() ? default_eigen_rho(c.rho) : c.rho_gamma},
                   {"boundary_rectangles", c.boundary_rectangles},
                   {"targets", targets}};
    j["checksums"] = r.checksums;
    if (r.domain_extension) {
        j["domain_extension"] = {{"pass", r.domain_extension->pass},
                                 {"rectangles", r.domain_extension->boundary.size()}};
    }
    nlohmann::json certs = nlohmann::json::array();
    for (const auto &cert : r.certificates) {
        certs.push_back(to_json(cert));
    }
    j["certificates"] = certs;
    nlohmann::json digits = nlohmann::json::object();
    for (const auto &[name, d] : r.digits) {
        digits[name] = {{"text", d.text}, {"count", d.count}};
    }
    j["digits"] = digits;
    if (r.failure) {
        j["failure"] = {{"stage", r.failure->stage}, {"message", r.failure->message}};
    }
    j["pass"] = !r.failure;
    return j;
}

// The part of a report that must not depend on worker count or timing.
inline nlohmann::json deterministic_payload(nlohmann::json j)
{
    if (j.contains("certificates")) {
        for (auto &c : j["certificates"]) {
            c.erase("run");
        }
    }
    return j;
}

inline std::string digits_text(const PipelineResult &r)
{
    std::ostringstream os;
    for (const auto &[name, d] : r.digits) {
        os << name << " = (" << d.count << " digits)\n" << grouped_digits(d) << '\n';
    }
    return os.str();
}

enum class Figure
{
    fig1,
    fig2a,
    fig2b,
    fig2c,
    fig2d,
    fig3a,
    fig3b,
    fig3c,
    fig3d,
    fig4a,
    fig4b
};

inline Figure parse_figure(const std::string &s)
{
    static const std::map<std::string, Figure> names = {
        {"fig1", Figure::fig1},   {"fig2a", Figure::fig2a}, {"fig2b", Figure::fig2b}, {"fig2c", Figure::fig2c},
        {"fig2d", Figure::fig2d}, {"fig3a", Figure::fig3a}, {"fig3b", Figure::fig3b}, {"fig3c", Figure::fig3c},
        {"fig3d", Figure::fig3d}, {"fig4a", Figure::fig4a}, {"fig4b", Figure::fig4b}};
    const auto it = names.find(s);
    if (it == names.end()) {
        throw ConfigError("unknown figure '" + s + "'");
    }
    return it->second;
}

struct CoveringRow
{
    Interval x;
    Rectangle y;
};

struct GraphSpec
{
    ExtensionTarget target;
    bool lower_case; // plotted against x with X = x^2
    bool extended;   // range beyond the disc
};

inline GraphSpec graph_spec(Figure f)
{
    switch (f) {
    case Figure::fig2a: return {ExtensionTarget::G, false, false};
    case Figure::fig2b: return {ExtensionTarget::g, true, false};
    case Figure::fig2c: return {ExtensionTarget::G, false, true};
    case Figure::fig2d: return {ExtensionTarget::g, true, true};
    case Figure::fig3a: return {ExtensionTarget::V, false, false};
    case Figure::fig3b: return {ExtensionTarget::v, true, false};
    case Figure::fig3c: return {ExtensionTarget::V, false, true};
    case Figure::fig3d: return {ExtensionTarget::v, true, true};
    case Figure::fig4a: return {ExtensionTarget::W, false, false};
    case Figure::fig4b: return {ExtensionTarget::w, true, true};
    case Figure::fig1: break;
    }
    throw Error("fig1 is a boundary covering, not a graph");
}

/**
 * Rectangles covering the graph of the figure's function over `subdivisions`
 * pieces of its interval: Omega cut with the real line, [c - r, c + r], or
 * [c - 4r, c + 4r] when extended; lower-case functions use the preimage
 * x^2 <= right end. Neighbouring pieces share endpoints, so the pieces cover
 * the interval.
 */
inline std::vector<CoveringRow> graph_covering(const CertifiedFunctions &f, Figure fig, std::size_t subdivisions,
                                               unsigned depth = 16)
{
    if (subdivisions == 0) {
        throw ConfigError("subdivisions must be positive");
    }
    const GraphSpec spec = graph_spec(fig);
    const bool needs_v = spec.target == ExtensionTarget::V || spec.target == ExtensionTarget::v;
    const bool needs_w = spec.target == ExtensionTarget::W || spec.target == ExtensionTarget::w;
    if ((needs_v && !f.V) || (needs_w && !f.W)) {
        throw MissingCertificate(std::string(needs_v ? "delta" : "gamma") + " certificate needed for this figure");
    }
    const Disc &d = f.G.domain();
    const mpfr_prec_t p = d.radius.prec();
    const Real span = spec.extended ? mul(d.radius, Real::from_long(4, p), MPFR_RNDN) : d.radius;
    Real lo = sub(d.center, span, MPFR_RNDN);
    Real hi = add(d.center, span, MPFR_RNDN);
    if (spec.lower_case) {
        hi = sqrt(hi, MPFR_RNDN);
        lo = -hi;
    }
    std::vector<Real> cuts;
    cuts.reserve(subdivisions + 1);
    const Real width = hi - lo;
    for (std::size_t i = 0; i <= subdivisions; ++i) {
        if (i == subdivisions) {
            cuts.push_back(hi);
        } else {
            cuts.push_back(lo + width * Real::from_long(static_cast<long>(i), p) /
                                    Real::from_long(static_cast<long>(subdivisions), p));
        }
    }
    std::vector<CoveringRow> rows;
    rows.reserve(subdivisions);
    for (std::size_t i = 0; i < subdivisions; ++i) {
        const Interval x(cuts[i], cuts[i + 1]);
        rows.push_back({x, extend_recursive(f, spec.target, x, depth)});
    }
    return rows;
}

inline std::string decimal_up(const Real &x) { return x.to_decimal(17, MPFR_RNDU); }
inline std::string decimal_down(const Real &x) { return x.to_decimal(17, MPFR_RNDD); }

/**
 * CSV covering data. Decimal endpoints are rounded outward, so each printed
 * rectangle contains the computed one.
 *   fig1:      curve,re_lo,re_hi,im_lo,im_hi   (curve in boundary, gamma1, gamma2)
 *   otherwise: x_lo,x_hi,y_lo,y_hi,im_lo,im_hi
 */
inline void emit_plot_covering(std::ostream &os, Figure fig, std::size_t subdivisions,
                               const std::optional<CertifiedFunctions> &f)
{
    if (!f) {
        throw MissingCertificate("fixed-point certificate needed for plots");
    }
    auto rect = [&](const Rectangle &z) {
        os << decimal_down(z.re().lo()) << ',' << decimal_up(z.re().hi()) << ',' << decimal_down(z.im().lo()) << ','
           << decimal_up(z.im().hi());
    };
    if (fig == Figure::fig1) {
        const DomainExtensionReport rep = check_domain_extension(f->G, subdivisions);
        os << "curve,re_lo,re_hi,im_lo,im_hi\n";
        const std::pair<const char *, const std::vector<Rectangle> *> curves[] = {
            {"boundary", &rep.boundary}, {"gamma1", &rep.gamma1}, {"gamma2", &rep.gamma2}};
        for (const auto &[name, rects] : curves) {
            for (const auto &z : *rects) {
                os << name << ',';
                rect(z);
                os << '\n';
            }
        }
        return;
    }
    os << "x_lo,x_hi,y_lo,y_hi,im_lo,im_hi\n";
    for (const auto &row : graph_covering(*f, fig, subdivisions)) {
        os << decimal_down(row.x.lo()) << ',' << decimal_up(row.x.hi()) << ',';
        rect(row.y);
        os << '\n';
    }
}

} // namespace feigen

#endif // FEIGEN_REPORTING_HPP

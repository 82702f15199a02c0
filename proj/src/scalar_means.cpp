#include "meanscope/scalar_means.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "meanscope/hyperbolic.hpp"

namespace meanscope {

namespace {

struct FamilyName {
    MeanFamily family;
    const char* code;
};

constexpr std::array<FamilyName, 15> kFamilyNames{{
    {MeanFamily::P, "P"},
    {MeanFamily::Q, "Q"},
    {MeanFamily::A, "A"},
    {MeanFamily::L, "L"},
    {MeanFamily::G, "G"},
    {MeanFamily::H, "H"},
    {MeanFamily::M, "M"},
    {MeanFamily::Stolarsky, "S"},
    {MeanFamily::Binomial, "B"},
    {MeanFamily::DualBinomial, "D"},
    {MeanFamily::ExpMean, "E"},
    {MeanFamily::AM, "AM"},
    {MeanFamily::GM, "GM"},
    {MeanFamily::HM, "HM"},
    {MeanFamily::LM, "LM"},
}};

bool takes_parameter(MeanFamily f) {
    switch (f) {
        case MeanFamily::P:
        case MeanFamily::Q:
        case MeanFamily::A:
        case MeanFamily::G:
        case MeanFamily::H:
        case MeanFamily::M:
        case MeanFamily::Stolarsky:
        case MeanFamily::Binomial:
        case MeanFamily::DualBinomial:
        case MeanFamily::ExpMean:
            return true;
        default:
            return false;
    }
}

std::string format_alpha(double a) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", a);
    return buf;
}

}  // namespace

EvalPolicy::EvalPolicy(double equal_args_rel, double small_z_series)
    : equal_args_rel_threshold(equal_args_rel), small_z_series_threshold(small_z_series) {
    if (!(equal_args_rel > 0.0) || equal_args_rel > 1e-2 || !(small_z_series > 0.0) ||
        small_z_series > 1e-2)
        throw std::invalid_argument("EvalPolicy: thresholds must lie in (0, 1e-2]");
}

MeanKind::MeanKind(MeanFamily family, double alpha) : family_(family), alpha_(alpha) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("MeanKind: parameter must be finite");
    switch (family) {
        case MeanFamily::A:
        case MeanFamily::H:
            if (std::abs(alpha) > 1.0)
                throw std::invalid_argument("MeanKind: " + family_code(family) +
                                            " requires |alpha| <= 1");
            break;
        case MeanFamily::G:
            if (std::abs(alpha) > 2.0)
                throw std::invalid_argument("MeanKind: G requires |alpha| <= 2");
            break;
        case MeanFamily::L:
        case MeanFamily::AM:
        case MeanFamily::GM:
        case MeanFamily::HM:
        case MeanFamily::LM:
            alpha_ = 0.0;
            break;
        default:
            break;
    }
}

std::string family_code(MeanFamily family) {
    for (const auto& e : kFamilyNames)
        if (e.family == family) return e.code;
    throw std::logic_error("family_code: unknown family");
}

bool MeanKind::parameterized() const { return takes_parameter(family_); }

bool MeanKind::symmetric() const { return family_ != MeanFamily::P && family_ != MeanFamily::Q; }

MeanKind MeanKind::parse(const std::string& code) {
    const auto colon = code.find(':');
    const std::string name = code.substr(0, colon);
    MeanFamily family{};
    bool found = false;
    for (const auto& e : kFamilyNames) {
        if (name == e.code) {
            family = e.family;
            found = true;
            break;
        }
    }
    if (!found) throw std::invalid_argument("MeanKind: unknown family in code '" + code + "'");
    double alpha = 0.0;
    if (colon != std::string::npos) {
        if (!takes_parameter(family))
            throw std::invalid_argument("MeanKind: family '" + name + "' takes no parameter");
        const std::string arg = code.substr(colon + 1);
        size_t used = 0;
        try {
            alpha = std::stod(arg, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("MeanKind: bad parameter in code '" + code + "'");
        }
        if (used != arg.size())
            throw std::invalid_argument("MeanKind: bad parameter in code '" + code + "'");
    } else if (takes_parameter(family)) {
        throw std::invalid_argument("MeanKind: family '" + name + "' requires a parameter");
    }
    return MeanKind(family, alpha);
}

std::string MeanKind::code() const {
    if (!takes_parameter(family_)) return family_code(family_);
    return family_code(family_) + ":" + format_alpha(alpha_);
}

double centered_log_mean(const MeanKind& kind, double u, const EvalPolicy& policy) {
    const double thr = policy.small_z_series_threshold;
    const double h = 0.5 * u;
    const double a = kind.alpha();
    const auto L = [thr](double z) { return ln_sinh_over(z, thr); };
    switch (kind.family()) {
        case MeanFamily::AM:
            return ln_cosh(h);
        case MeanFamily::GM:
            return 0.0;
        case MeanFamily::HM:
            return -ln_cosh(h);
        case MeanFamily::L:
        case MeanFamily::LM:
            return L(h);
        case MeanFamily::P:
            return a * h + L(h) - L(a * h);
        case MeanFamily::Q:
            return -a * h + L(h) - L(a * h);
        case MeanFamily::A:
            return ln_cosh(a * h) + L(h) - L(a * h);
        case MeanFamily::G:
            return L(h) - L(a * h);
        case MeanFamily::H:
            return L(h) - L(a * u);
        case MeanFamily::M:
            return L(a * h) - L((a - 1.0) * h);
        case MeanFamily::Stolarsky: {
            // Exponent (L(h) - L(a h)) / (1 - a) has a removable singularity
            // at a = 1; expand around it to first order there.
            if (std::abs(1.0 - a) <= 1e-6)
                return h * d_ln_sinh_over(h) -
                       (1.0 - a) * 0.5 * h * h * d2_ln_sinh_over(h);
            return (L(h) - L(a * h)) / (1.0 - a);
        }
        case MeanFamily::Binomial:
            return a == 0.0 ? 0.0 : ln_cosh(a * h) / a;
        case MeanFamily::DualBinomial:
            return a == 0.0 ? 0.0 : -ln_cosh(a * h) / a;
        case MeanFamily::ExpMean:
            return a == 0.0 ? 0.0 : L(a * h) / a;
    }
    throw std::logic_error("centered_log_mean: unknown family");
}

double eval_mean(const MeanKind& kind, double x, double y, const EvalPolicy& policy) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
        throw std::domain_error("eval_mean: arguments must be positive and finite");
    if (x == y) return x;
    double u;
    if (std::abs(x - y) <= policy.equal_args_rel_threshold * std::max(x, y)) {
        // (x - y) is exact here (the operands are within a factor of two), so
        // this form keeps full relative accuracy in u arbitrarily close to
        // the diagonal, where log(x / y) would not.
        u = 2.0 * std::atanh((x - y) / (x + y));
    } else {
        // Separate logs make u an exact negation under argument swap, so
        // symmetric kinds evaluate bitwise-symmetrically.
        u = std::log(x) - std::log(y);
    }
    return std::sqrt(x) * std::sqrt(y) * std::exp(centered_log_mean(kind, u, policy));
}

double eval_ratio(const MeanKind& numerator, const MeanKind& denominator, double t,
                  RatioScale scale, const EvalPolicy& policy) {
    if (!std::isfinite(t)) throw std::domain_error("eval_ratio: t must be finite");
    const double u = scale == RatioScale::Exp2T ? 2.0 * t : t;
    const double r =
        centered_log_mean(numerator, u, policy) - centered_log_mean(denominator, u, policy);
    if (r > 709.0)
        throw std::overflow_error("eval_ratio: ratio exceeds double range at t = " +
                                  std::to_string(t));
    return std::exp(r);
}

double mean_at_zero(const MeanKind& kind, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::domain_error("mean_at_zero: argument must be nonnegative and finite");
    if (lambda == 0.0) return 0.0;
    const double a = kind.alpha();
    switch (kind.family()) {
        case MeanFamily::P:
            return a > 0.0 ? a * lambda : 0.0;
        case MeanFamily::Q:
            return a < 0.0 ? -a * lambda : 0.0;
        case MeanFamily::A:
            return 0.5 * std::abs(a) * lambda;
        case MeanFamily::AM:
            return 0.5 * lambda;
        case MeanFamily::M:
            return a > 1.0 ? (a - 1.0) / a * lambda : 0.0;
        case MeanFamily::Stolarsky: {
            if (a <= 0.0) return 0.0;
            if (std::abs(a - 1.0) <= 1e-12) return lambda / 2.71828182845904524;
            return std::pow(a, 1.0 / (1.0 - a)) * lambda;
        }
        case MeanFamily::Binomial:
            return a > 0.0 ? std::exp2(-1.0 / a) * lambda : 0.0;
        case MeanFamily::L:
        case MeanFamily::LM:
        case MeanFamily::G:
        case MeanFamily::H:
        case MeanFamily::GM:
        case MeanFamily::HM:
        case MeanFamily::DualBinomial:
        case MeanFamily::ExpMean:
            return 0.0;
    }
    throw std::logic_error("mean_at_zero: unknown family");
}

}  // namespace meanscope

#pragma once

#include <string>

namespace meanscope {

// Catalog of two-variable homogeneous mean families. P and Q are the
// one-sided building blocks (not symmetric); everything else is a symmetric
// mean. AM/GM/HM/LM ignore the parameter, as does L (its value is
// parameter-independent).
enum class MeanFamily {
    P,
    Q,
    A,
    L,
    G,
    H,
    M,
    Stolarsky,
    Binomial,
    DualBinomial,
    ExpMean,
    AM,
    GM,
    HM,
    LM,
};

// Evaluation thresholds. equal_args_rel_threshold gates the near-diagonal
// branch of eval_mean; small_z_series_threshold gates the Taylor form of
// ln(sinh(z)/z). Both must lie in (0, 1e-2].
struct EvalPolicy {
    double equal_args_rel_threshold = 1e-8;
    double small_z_series_threshold = 1e-4;

    EvalPolicy() = default;
    EvalPolicy(double equal_args_rel, double small_z_series);
};

// A mean family together with its parameter. Construction enforces the
// family's parameter domain: |alpha| <= 1 for A and H, |alpha| <= 2 for G,
// any finite alpha elsewhere. Parameter-free families store alpha = 0.
class MeanKind {
   public:
    explicit MeanKind(MeanFamily family, double alpha = 0.0);

    // Text codes: "A:0.5", "M:0.75", "LM", "S:0.25", ...
    static MeanKind parse(const std::string& code);
    std::string code() const;

    MeanFamily family() const { return family_; }
    double alpha() const { return alpha_; }
    bool parameterized() const;
    // False for P and Q, which swap into each other under argument exchange.
    bool symmetric() const;

   private:
    MeanFamily family_;
    double alpha_;
};

// Argument scale for eval_ratio: the ratio is taken at (e^t, 1) or (e^[2t], 1).
enum class RatioScale { ExpT, Exp2T };

// ln(M(x, y) / sqrt(x y)) as a function of u = ln(x / y). Homogeneity makes
// this the complete description of the mean; every removable parameter or
// argument singularity is handled by the series fallback inside.
double centered_log_mean(const MeanKind& kind, double u, const EvalPolicy& policy = {});

// M(x, y) for x, y > 0. Exactly x when x == y.
double eval_mean(const MeanKind& kind, double x, double y, const EvalPolicy& policy = {});

// numerator(s, 1) / denominator(s, 1) with s = e^t or e^[2t], computed in the
// log domain so it stays finite for |t| up to about 700/max(1, |alpha|).
// Exactly 1 at t = 0.
double eval_ratio(const MeanKind& numerator, const MeanKind& denominator, double t,
                  RatioScale scale = RatioScale::ExpT, const EvalPolicy& policy = {});

// Continuous extension M(lambda, 0) = lim_{mu -> 0+} M(lambda, mu), per
// family in closed form. Symmetric families extend symmetrically.
double mean_at_zero(const MeanKind& kind, double lambda);

std::string family_code(MeanFamily family);

}  // namespace meanscope

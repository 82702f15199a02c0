#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace meanscope {

// Unitarily invariant norms, identified by what they sum over the singular
// value sequence. Frobenius is Schatten(2) evaluated through the same path.
class NormKind {
   public:
    enum class Variant { Schatten, KyFan, Operator, Trace, Frobenius };

    static NormKind schatten(double p);
    static NormKind ky_fan(int k);
    static NormKind operator_norm() { return NormKind(Variant::Operator); }
    static NormKind trace() { return NormKind(Variant::Trace); }
    static NormKind frobenius() { return NormKind(Variant::Frobenius); }

    // Text codes: "schatten:3", "kyfan:2", "op", "tr", "fro".
    static NormKind parse(const std::string& code);
    std::string code() const;

    Variant variant() const { return variant_; }
    double p() const { return p_; }
    int k() const { return k_; }

   private:
    explicit NormKind(Variant v, double p = 0.0, int k = 0) : variant_(v), p_(p), k_(k) {}
    Variant variant_;
    double p_;
    int k_;
};

// Singular values in descending order.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& A);

double uinorm(const NormKind& kind, const Eigen::MatrixXd& A);

// Same norm from a precomputed descending singular value vector, so one
// factorization can serve a whole battery of norms.
double uinorm_from_singular_values(const NormKind& kind, const Eigen::VectorXd& sigma);

// Every Ky Fan norm up to min(n, m), plus Schatten 1/2/3 and the operator
// norm: deciding all of these decides every unitarily invariant norm
// comparison up to the sampled resolution.
std::vector<NormKind> default_norm_battery(int n, int m);

}  // namespace meanscope

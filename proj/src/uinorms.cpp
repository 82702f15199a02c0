#include "meanscope/uinorms.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/SVD>

namespace meanscope {

NormKind NormKind::schatten(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("NormKind: Schatten exponent must be >= 1");
    return NormKind(Variant::Schatten, p);
}

NormKind NormKind::ky_fan(int k) {
    if (k < 1) throw std::invalid_argument("NormKind: Ky Fan order must be >= 1");
    return NormKind(Variant::KyFan, 0.0, k);
}

NormKind NormKind::parse(const std::string& code) {
    if (code == "op") return operator_norm();
    if (code == "tr") return trace();
    if (code == "fro") return frobenius();
    const auto colon = code.find(':');
    if (colon != std::string::npos) {
        const std::string name = code.substr(0, colon);
        const std::string arg = code.substr(colon + 1);
        size_t used = 0;
        try {
            if (name == "schatten") {
                const double p = std::stod(arg, &used);
                if (used == arg.size()) return schatten(p);
            } else if (name == "kyfan") {
                const int k = std::stoi(arg, &used);
                if (used == arg.size()) return ky_fan(k);
            }
        } catch (const std::invalid_argument&) {
        } catch (const std::out_of_range&) {
        }
    }
    throw std::invalid_argument("NormKind: unknown norm code '" + code + "'");
}

std::string NormKind::code() const {
    switch (variant_) {
        case Variant::Operator:
            return "op";
        case Variant::Trace:
            return "tr";
        case Variant::Frobenius:
            return "fro";
        case Variant::KyFan:
            return "kyfan:" + std::to_string(k_);
        case Variant::Schatten: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", p_);
            return std::string("schatten:") + buf;
        }
    }
    throw std::logic_error("NormKind: unknown variant");
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& A) {
    if (A.size() == 0) throw std::invalid_argument("singular_values: empty matrix");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    return svd.singularValues();
}

double uinorm_from_singular_values(const NormKind& kind, const Eigen::VectorXd& sigma) {
    const int r = static_cast<int>(sigma.size());
    if (r == 0) throw std::invalid_argument("uinorm: empty singular value vector");
    switch (kind.variant()) {
        case NormKind::Variant::Operator:
            return sigma[0];
        case NormKind::Variant::Trace:
            return sigma.sum();
        case NormKind::Variant::KyFan: {
            if (kind.k() > r)
                throw std::invalid_argument("uinorm: Ky Fan order exceeds min(n, m)");
            return sigma.head(kind.k()).sum();
        }
        case NormKind::Variant::Schatten:
        case NormKind::Variant::Frobenius: {
            const double p = kind.variant() == NormKind::Variant::Frobenius ? 2.0 : kind.p();
            const double top = sigma[0];
            if (top == 0.0) return 0.0;
            double sum = 0.0;
            for (int i = 0; i < r; ++i) sum += std::pow(sigma[i] / top, p);
            return top * std::pow(sum, 1.0 / p);
        }
    }
    throw std::logic_error("uinorm: unknown variant");
}

double uinorm(const NormKind& kind, const Eigen::MatrixXd& A) {
    return uinorm_from_singular_values(kind, singular_values(A));
}

std::vector<NormKind> default_norm_battery(int n, int m) {
    if (n < 1 || m < 1) throw std::invalid_argument("default_norm_battery: bad dimensions");
    std::vector<NormKind> norms;
    const int r = std::min(n, m);
    for (int k = 1; k <= r; ++k) norms.push_back(NormKind::ky_fan(k));
    norms.push_back(NormKind::schatten(1.0));
    norms.push_back(NormKind::schatten(2.0));
    norms.push_back(NormKind::schatten(3.0));
    norms.push_back(NormKind::operator_norm());
    return norms;
}

}  // namespace meanscope

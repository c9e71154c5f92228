#include "bwl/testfn.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace bwl::fn {

const char* to_string(Kind k) {
    switch (k) {
        case Kind::Monomial: return "monomial";
        case Kind::HLExtremal: return "hl";
        case Kind::Taylor: return "taylor";
        case Kind::Dilate: return "dilate";
    }
    return "?";
}

TestFunction TestFunction::monomial(int n) {
    if (n < 0) throw ParameterError("monomial: need degree n >= 0");
    TestFunction f;
    f.kind_ = Kind::Monomial;
    f.n_ = n;
    return f;
}

TestFunction TestFunction::hl_extremal(int k) {
    if (k < 1) throw ParameterError("hl_extremal: need order k >= 1");
    TestFunction f;
    f.kind_ = Kind::HLExtremal;
    f.n_ = k;
    return f;
}

TestFunction TestFunction::taylor(std::vector<std::complex<double>> coeffs) {
    if (coeffs.empty())
        throw ParameterError("taylor: need at least one coefficient");
    for (const auto& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw ParameterError("taylor: coefficients must be finite");
    TestFunction f;
    f.kind_ = Kind::Taylor;
    f.coeffs_ = std::move(coeffs);
    return f;
}

TestFunction TestFunction::dilate(TestFunction base, double rho) {
    if (!(rho >= 0.0) || !(rho < 1.0))
        throw ParameterError("dilate: need rho in [0,1)");
    TestFunction f;
    f.kind_ = Kind::Dilate;
    f.base_ = std::make_shared<TestFunction>(std::move(base));
    f.rho_ = rho;
    return f;
}

int TestFunction::degree() const {
    if (kind_ != Kind::Monomial)
        throw ParameterError("degree(): not a monomial");
    return n_;
}

int TestFunction::order() const {
    if (kind_ != Kind::HLExtremal)
        throw ParameterError("order(): not an HL extremal");
    return n_;
}

const std::vector<std::complex<double>>& TestFunction::coeffs() const {
    if (kind_ != Kind::Taylor)
        throw ParameterError("coeffs(): not a Taylor polynomial");
    return coeffs_;
}

const TestFunction& TestFunction::base() const {
    if (kind_ != Kind::Dilate)
        throw ParameterError("base(): not a dilate");
    return *base_;
}

double TestFunction::rho() const {
    if (kind_ != Kind::Dilate)
        throw ParameterError("rho(): not a dilate");
    return rho_;
}

std::complex<double> hl_prefactor(int k) {
    switch (((k - 1) % 4 + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

namespace {

std::complex<double> ipow(std::complex<double> z, int n) {
    std::complex<double> acc{1.0, 0.0};
    while (n > 0) {
        if (n & 1) acc *= z;
        z *= z;
        n >>= 1;
    }
    return acc;
}

}  // namespace

std::complex<double> TestFunction::value(std::complex<double> z) const {
    switch (kind_) {
        case Kind::Monomial:
            return ipow(z, n_);
        case Kind::HLExtremal: {
            const std::complex<double> omz = 1.0 - z;
            return hl_prefactor(n_) / ipow(omz, n_);
        }
        case Kind::Taylor: {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t i = coeffs_.size(); i-- > 0;)
                acc = acc * z + coeffs_[i];
            return acc;
        }
        case Kind::Dilate:
            return base_->value(rho_ * z);
    }
    return {0.0, 0.0};
}

std::complex<double> TestFunction::derivative(std::complex<double> z) const {
    switch (kind_) {
        case Kind::Monomial:
            if (n_ == 0) return {0.0, 0.0};
            return double(n_) * ipow(z, n_ - 1);
        case Kind::HLExtremal: {
            const std::complex<double> omz = 1.0 - z;
            return double(n_) * hl_prefactor(n_) / ipow(omz, n_ + 1);
        }
        case Kind::Taylor: {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t i = coeffs_.size(); i-- > 1;)
                acc = acc * z + double(i) * coeffs_[i];
            return acc;
        }
        case Kind::Dilate:
            return rho_ * base_->derivative(rho_ * z);
    }
    return {0.0, 0.0};
}

std::complex<double> TestFunction::value_at_zero() const {
    switch (kind_) {
        case Kind::Monomial:
            return n_ == 0 ? std::complex<double>{1.0, 0.0}
                           : std::complex<double>{0.0, 0.0};
        case Kind::HLExtremal:
            return hl_prefactor(n_);
        case Kind::Taylor:
            return coeffs_.front();
        case Kind::Dilate:
            return base_->value_at_zero();
    }
    return {0.0, 0.0};
}

namespace {

// Formats a complex coefficient as "a", "bi", or "a+bi"/"a-bi" with %.17g
// parts, the shortest form that parse_test_function reads back.
std::string coeff_str(std::complex<double> c) {
    char buf[64];
    std::string out;
    if (c.real() != 0.0 || c.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", c.real());
        out += buf;
    }
    if (c.imag() != 0.0) {
        if (!out.empty() && c.imag() > 0.0) out += '+';
        std::snprintf(buf, sizeof buf, "%.17g", c.imag());
        out += buf;
        out += 'i';
    }
    return out;
}

// Parses coeff_str's grammar: [real][(+|-)imag i] | imag i.
std::complex<double> parse_coeff(const std::string& s) {
    if (s.empty()) throw ParameterError("test function: empty coefficient");
    const char* p = s.c_str();
    char* end = nullptr;
    double first = std::strtod(p, &end);
    if (end == p)
        throw ParameterError("test function: bad coefficient '" + s + "'");
    if (*end == '\0') return {first, 0.0};
    if (*end == 'i' && end[1] == '\0') return {0.0, first};
    const char* q = end;
    double second = std::strtod(q, &end);
    if (end == q || *end != 'i' || end[1] != '\0')
        throw ParameterError("test function: bad coefficient '" + s + "'");
    return {first, second};
}

}  // namespace

std::string TestFunction::name() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Monomial:
            os << "monomial:" << n_;
            break;
        case Kind::HLExtremal:
            os << "hl:" << n_;
            break;
        case Kind::Taylor: {
            os << "taylor:";
            for (std::size_t i = 0; i < coeffs_.size(); ++i) {
                if (i) os << ',';
                os << coeff_str(coeffs_[i]);
            }
            break;
        }
        case Kind::Dilate: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", rho_);
            os << "dilate(" << base_->name() << ',' << buf << ')';
            break;
        }
    }
    return os.str();
}

TestFunction parse_test_function(const std::string& spec) {
    if (spec.rfind("monomial:", 0) == 0) {
        char* end = nullptr;
        const char* p = spec.c_str() + 9;
        const long n = std::strtol(p, &end, 10);
        if (end == p || *end != '\0' || n < 0)
            throw ParameterError("test function: bad monomial '" + spec + "'");
        return TestFunction::monomial(int(n));
    }
    if (spec.rfind("hl:", 0) == 0) {
        char* end = nullptr;
        const char* p = spec.c_str() + 3;
        const long k = std::strtol(p, &end, 10);
        if (end == p || *end != '\0' || k < 1)
            throw ParameterError("test function: bad hl '" + spec + "'");
        return TestFunction::hl_extremal(int(k));
    }
    if (spec.rfind("taylor:", 0) == 0) {
        std::vector<std::complex<double>> cs;
        std::string body = spec.substr(7);
        std::size_t pos = 0;
        while (pos <= body.size()) {
            const std::size_t comma = body.find(',', pos);
            const std::string tok =
                body.substr(pos, comma == std::string::npos ? std::string::npos
                                                            : comma - pos);
            cs.push_back(parse_coeff(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return TestFunction::taylor(std::move(cs));
    }
    if (spec.rfind("dilate(", 0) == 0 && spec.back() == ')') {
        const std::string body = spec.substr(7, spec.size() - 8);
        // The rho argument follows the last comma at paren depth zero.
        int depth = 0;
        std::size_t split = std::string::npos;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '(') ++depth;
            else if (body[i] == ')') --depth;
            else if (body[i] == ',' && depth == 0) split = i;
        }
        if (split == std::string::npos)
            throw ParameterError("test function: bad dilate '" + spec + "'");
        char* end = nullptr;
        const std::string rs = body.substr(split + 1);
        const double rho = std::strtod(rs.c_str(), &end);
        if (end == rs.c_str() || *end != '\0')
            throw ParameterError("test function: bad dilate rho '" + spec +
                                 "'");
        return TestFunction::dilate(parse_test_function(body.substr(0, split)),
                                    rho);
    }
    throw ParameterError("test function: unrecognized spec '" + spec + "'");
}

}  // namespace bwl::fn

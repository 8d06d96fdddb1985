#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace qgb {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Eigenvalues below kSupportEps * lambda_max are treated as exact zeros.
constexpr double kSupportEps = 1e-12;
constexpr double kHermTol = 1e-10;
constexpr double kCompletenessTol = 1e-8;
constexpr int kDefaultDimCap = 256;

struct Factor {
    std::string label;
    int dim = 1;
    bool operator==(const Factor&) const = default;
};

class HilbertSpace {
public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<Factor> factors, int dim_cap = kDefaultDimCap);

    static HilbertSpace single(const std::string& label, int dim);

    const std::vector<Factor>& factors() const { return factors_; }
    int dim() const { return dim_; }
    bool has(const std::string& label) const;
    int index_of(const std::string& label) const;
    int factor_dim(const std::string& label) const { return factors_[index_of(label)].dim; }

    // Keeps the listed factors in their original order.
    HilbertSpace restrict_to(const std::vector<std::string>& keep) const;
    HilbertSpace replace(const std::string& label, const Factor& with) const;
    HilbertSpace tensor(const HilbertSpace& other) const;
    std::string describe() const;

    bool operator==(const HilbertSpace& o) const { return factors_ == o.factors_; }

private:
    std::vector<Factor> factors_;
    int dim_ = 1;
};

struct Eig {
    RVec values;   // descending
    Mat vectors;   // columns are eigenvectors
};

Mat hermitize(const Mat& m);

// Cyclic Jacobi with a fixed sweep order; throws NumericalError when the sweep cap is hit.
Eig herm_eig(const Mat& h);

double support_threshold(const RVec& values);

// Applies f to the eigenvalues. With support_only, eigenvalues at or below the
// support threshold map to 0 regardless of f.
Mat apply_spectral(const Eig& e, const std::function<double(double)>& f, bool support_only);

class Observable {
public:
    Observable() = default;
    Observable(HilbertSpace space, const Mat& m);

    static Observable identity(const HilbertSpace& space);
    static Observable zero(const HilbertSpace& space);

    const HilbertSpace& space() const { return space_; }
    const Mat& matrix() const { return m_; }
    int dim() const { return space_.dim(); }
    const Eig& eig() const;

    double expectation(const Mat& rho) const;
    double lambda_max() const { return eig().values(0); }
    double lambda_min() const { return eig().values(eig().values.size() - 1); }

private:
    struct Cache {
        std::once_flag once;
        Eig eig;
    };
    HilbertSpace space_;
    Mat m_;
    std::shared_ptr<Cache> cache_;
};

class State : public Observable {
public:
    State() = default;
    // Validates PSD (eigenvalues >= -1e-10) and unit trace within 1e-10.
    State(HilbertSpace space, const Mat& m);

    // Divides by the trace first; used for states produced by numerical pipelines.
    static State normalized(HilbertSpace space, const Mat& m);
    static State pure(HilbertSpace space, const Vec& psi);
    static State maximally_mixed(const HilbertSpace& space);
};

struct PovmElement {
    std::string outcome;
    Observable effect;
};

class Povm {
public:
    Povm() = default;
    Povm(HilbertSpace space, std::vector<PovmElement> elements);

    const HilbertSpace& space() const { return space_; }
    const std::vector<PovmElement>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }

private:
    HilbertSpace space_;
    std::vector<PovmElement> elements_;
};

class Channel {
public:
    Channel() = default;
    Channel(HilbertSpace in, HilbertSpace out, std::vector<Mat> kraus);

    static Channel identity(const HilbertSpace& in, const HilbertSpace& out);

    const HilbertSpace& input() const { return in_; }
    const HilbertSpace& output() const { return out_; }
    const std::vector<Mat>& kraus() const { return kraus_; }

    Mat apply(const Mat& rho) const;
    State apply(const State& rho) const;

private:
    HilbertSpace in_, out_;
    std::vector<Mat> kraus_;
};

Mat kron(const Mat& a, const Mat& b);
Observable tensor(const Observable& a, const Observable& b);
State tensor(const State& a, const State& b);
State tensor_power(const State& a, int n, const std::string& label_prefix = "c");

Observable matrix_function(const Observable& a, const std::function<double(double)>& f, bool support_only);
Mat herm_exp(const Mat& h);

Mat partial_trace(const Mat& a, const HilbertSpace& space, const std::vector<std::string>& keep);
Observable partial_trace(const Observable& a, const std::vector<std::string>& keep);
State partial_trace(const State& a, const std::vector<std::string>& keep);

// Lifts an operator acting on one factor to the full space (identity elsewhere).
// The operator may be rectangular; the factor then changes dimension to op.rows().
Mat embed(const Mat& op, const HilbertSpace& space, const std::string& label);

// Reorders tensor factors: factor k of the result is factor perm[k] of the input.
Mat permute_factors(const Mat& a, const std::vector<int>& dims, const std::vector<int>& perm);

// (I (x) channel) acting on `label`; the output space replaces that factor.
State apply_on_factor(const Channel& ch, const State& rho, const std::string& label,
                      const std::string& out_label);

double schatten_norm(const Mat& a, double p);
double trace_real(const Mat& a);
double op_norm_diff_identity(const Mat& a);

// Support relations decided on the clipped spectrum.
Mat support_projector(const Eig& e);
bool supported_in(const State& rho, const State& sigma);
bool orthogonal(const State& rho, const State& sigma);

}  // namespace qgb

#pragma once
#include <cstdint>
#include <vector>

#include "hcu/errors.hpp"

namespace hcu {

// Sparse N x N coupling matrix in CSR layout. K(k,l) is the strength with
// which unit l drives unit k. Entries are non-negative, the diagonal is
// zero, and iteration order is canonical row-major by (k,l).
class CouplingMatrix {
public:
    CouplingMatrix() = default;
    explicit CouplingMatrix(int units) : units_(units), pending_(0) {
        if (units < 1) throw ConfigError("CouplingMatrix: units must be >= 1");
    }

    void add(int k, int l, double weight);
    void finalize(); // sort entries row-major; idempotent

    int units() const { return units_; }
    std::size_t nnz() const { return col_.size(); }

    // CSR accessors (valid after finalize()).
    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::int32_t>& col() const { return col_; }
    const std::vector<double>& weight() const { return weight_; }

    double at(int k, int l) const; // 0 when absent

    bool operator==(const CouplingMatrix& o) const {
        return units_ == o.units_ && row_ptr_ == o.row_ptr_ && col_ == o.col_ &&
               weight_ == o.weight_;
    }

private:
    struct Entry {
        std::int32_t row;
        std::int32_t col;
        double w;
    };
    int units_ = 0;
    std::vector<Entry> pending_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::int32_t> col_;
    std::vector<double> weight_;
    bool finalized_ = false;
};

// Per-unit decay rates, noise strengths, and the pacemaker index set.
struct ParameterField {
    std::vector<double> gamma;
    std::vector<double> sigma;
    std::vector<int> pacemakers;

    int units() const { return static_cast<int>(gamma.size()); }

    static ParameterField uniform(int units, double gamma_value, double sigma_value) {
        ParameterField pf;
        pf.gamma.assign(units, gamma_value);
        pf.sigma.assign(units, sigma_value);
        return pf;
    }

    void validate() const;
};

} // namespace hcu

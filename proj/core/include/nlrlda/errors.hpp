#pragma once

#include <stdexcept>
#include <string>

namespace nlrlda {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user input: bad CSV cells, bad flag values, shape mismatches at the boundary.
class input_error : public error {
public:
    using error::error;
};

class empty_class : public input_error {
public:
    using input_error::input_error;
};

class insufficient_samples : public input_error {
public:
    using input_error::input_error;
};

class non_finite_data : public input_error {
public:
    using input_error::input_error;
};

class dimension_mismatch : public input_error {
public:
    using input_error::input_error;
};

/// CSV cell/row problems; carries 1-based row/column for diagnostics.
class parse_error : public input_error {
public:
    parse_error(const std::string& what, long row, long col)
        : input_error(what + " (row " + std::to_string(row) + ", column " + std::to_string(col) + ")"),
          row_(row), col_(col) {}
    long row() const noexcept { return row_; }
    long col() const noexcept { return col_; }

private:
    long row_;
    long col_;
};

class domain_error : public input_error {
public:
    using input_error::input_error;
};

class singular_sigma : public error {
public:
    using error::error;
};

class singular_target : public error {
public:
    using error::error;
};

class all_zero_spectrum : public error {
public:
    using error::error;
};

/// The misclassification-rate denominator degenerated (D or D_c <= 0).
/// Callers fall back to the prior-only trivial classifier.
class degenerate_d : public error {
public:
    using error::error;
};

/// tr[S(S+gamma I)^-1]/(n-2) >= 1: impossible for gamma > 0, signals corrupted inputs.
class degenerate_trace : public error {
public:
    using error::error;
};

/// e_hat' = 0 (zero pooled covariance), the bias-correction term is undefined.
class degenerate_prime : public error {
public:
    using error::error;
};

/// An iterative numeric routine failed to reach its tolerance.
class no_convergence : public error {
public:
    no_convergence(const std::string& what, double residual)
        : error(what + " (final residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class convergence_failure : public error {
public:
    using error::error;
};

class io_error : public input_error {
public:
    using input_error::input_error;
};

}  // namespace nlrlda

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nlrlda/errors.hpp"

namespace nlrlda {

/// A binary-labeled sample set. Observations are stored column-wise:
/// features(:, j) is observation j, labels[j] in {0, 1}.
struct LabeledDataset {
    Eigen::MatrixXd features;       // p x n
    std::vector<int> labels;        // size n
    std::vector<std::string> feature_names;  // size p; synthesized as f0..f{p-1} if absent

    Eigen::Index dim() const { return features.rows(); }
    Eigen::Index size() const { return features.cols(); }
    Eigen::Index count(int label) const;

    /// Throws if labels are not {0,1}, sizes disagree, or features contain non-finite values.
    void validate() const;
};

/// Read a dataset from CSV. A header row is required; the column named
/// "label" holds integer class labels in {0,1}; every other column is parsed
/// as a feature double, in header order. Non-numeric or missing cells are a
/// hard error with row/column diagnostics.
LabeledDataset read_csv(const std::string& path);

/// Write a dataset in the same schema read_csv ingests.
void write_csv(const LabeledDataset& data, const std::string& path);

}  // namespace nlrlda

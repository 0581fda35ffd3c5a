#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mvgl {

/// V feature matrices over the same N samples (view v is N x d_v), plus
/// optional ground-truth cluster ids.
struct MultiViewDataset {
  std::vector<Eigen::MatrixXd> views;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> names;

  Eigen::Index samples() const { return views.empty() ? 0 : views.front().rows(); }
  Eigen::Index view_count() const { return static_cast<Eigen::Index>(views.size()); }

  /// Throws InvalidInput unless V >= 1, N >= 2, every d_v >= 1, rows agree,
  /// entries are finite and labels (if any) have length N.
  void validate() const;
};

/// Reads view1.csv .. viewV.csv (headerless, comma separated, one sample per
/// row) and the optional labels.csv (one integer per line) from `dir`.
/// Throws LoadError naming the file and line of the first problem.
MultiViewDataset load_dataset(const std::filesystem::path& dir);

/// Writes the layout load_dataset reads. Creates `dir` if needed.
void save_dataset(const MultiViewDataset& data, const std::filesystem::path& dir);

/// Headerless numeric matrix CSV. Throws LoadError on ragged rows or
/// non-numeric cells.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& file);

/// One integer per line. Blank trailing lines are ignored.
std::vector<int> read_labels_csv(const std::filesystem::path& file);

/// Writes `contents` to a sibling temp file, then renames it over `file`.
void write_file_atomic(const std::filesystem::path& file, const std::string& contents);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace mvgl

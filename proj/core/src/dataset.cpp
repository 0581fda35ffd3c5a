#include "mvgl/dataset.hpp"

#include "mvgl/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mvgl {
namespace fs = std::filesystem;

namespace {

std::string where(const fs::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::ifstream open_or_throw(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw LoadError(file.string() + ": cannot open file");
  return in;
}

}  // namespace

void MultiViewDataset::validate() const {
  if (views.empty()) throw InvalidInput("dataset has no views");
  const Eigen::Index n = views.front().rows();
  if (n < 2) throw InvalidInput("dataset needs at least 2 samples, got " + std::to_string(n));
  for (std::size_t v = 0; v < views.size(); ++v) {
    if (views[v].rows() != n) {
      throw InvalidInput("view " + std::to_string(v + 1) + " has " +
                         std::to_string(views[v].rows()) + " rows, expected " + std::to_string(n));
    }
    if (views[v].cols() < 1) {
      throw InvalidInput("view " + std::to_string(v + 1) + " has no features");
    }
    if (!views[v].allFinite()) {
      throw InvalidInput("view " + std::to_string(v + 1) + " has non-finite entries");
    }
  }
  if (labels && static_cast<Eigen::Index>(labels->size()) != n) {
    throw InvalidInput("labels have length " + std::to_string(labels->size()) + ", expected " +
                       std::to_string(n));
  }
}

Eigen::MatrixXd read_matrix_csv(const fs::path& file) {
  std::ifstream in = open_or_throw(file);
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Eigen::Index count = 0;
    std::string_view rest = line;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view cell = rest.substr(0, comma);
      double x = 0.0;
      if (!parse_number(cell, x) || !std::isfinite(x)) {
        throw LoadError(where(file, line_no) + ": non-numeric cell '" + std::string(trim(cell)) +
                        "'");
      }
      values.push_back(x);
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols < 0) {
      cols = count;
    } else if (count != cols) {
      throw LoadError(where(file, line_no) + ": ragged row with " + std::to_string(count) +
                      " cells, expected " + std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) throw LoadError(file.string() + ": file has no rows");

  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  }
  return m;
}

std::vector<int> read_labels_csv(const fs::path& file) {
  std::ifstream in = open_or_throw(file);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    int id = 0;
    if (!parse_number(std::string_view(line), id)) {
      throw LoadError(where(file, line_no) + ": label '" + std::string(trim(line)) +
                      "' is not an integer");
    }
    labels.push_back(id);
  }
  return labels;
}

MultiViewDataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError(dir.string() + ": not a directory");

  MultiViewDataset data;
  std::vector<fs::path> files;
  for (int v = 1;; ++v) {
    const fs::path file = dir / ("view" + std::to_string(v) + ".csv");
    if (!fs::exists(file)) break;
    files.push_back(file);
  }
  if (files.empty()) throw LoadError((dir / "view1.csv").string() + ": missing view file");
  // A gap (view1, view3 without view2) is a missing view, not a shorter dataset.
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("view") && name.ends_with(".csv")) {
      int index = 0;
      const std::string_view digits(name.data() + 4, name.size() - 8);
      if (parse_number(digits, index) && index > static_cast<int>(files.size())) {
        throw LoadError((dir / ("view" + std::to_string(files.size() + 1) + ".csv")).string() +
                        ": missing view file (found " + name + ")");
      }
    }
  }

  for (std::size_t v = 0; v < files.size(); ++v) {
    data.views.push_back(read_matrix_csv(files[v]));
    data.names.push_back(files[v].stem().string());
    if (v > 0 && data.views[v].rows() != data.views[0].rows()) {
      throw LoadError(files[v].string() + ": row count " + std::to_string(data.views[v].rows()) +
                      " does not match " + files[0].string() + " (" +
                      std::to_string(data.views[0].rows()) + " rows)");
    }
  }

  const fs::path labels_file = dir / "labels.csv";
  if (fs::exists(labels_file)) {
    std::vector<int> labels = read_labels_csv(labels_file);
    if (static_cast<Eigen::Index>(labels.size()) != data.views[0].rows()) {
      throw LoadError(labels_file.string() + ": has " + std::to_string(labels.size()) +
                      " labels, expected " + std::to_string(data.views[0].rows()) + " (one per sample)");
    }
    data.labels = std::move(labels);
  }

  try {
    data.validate();
  } catch (const InvalidInput& e) {
    throw LoadError(dir.string() + ": " + e.what());
  }
  return data;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void write_file_atomic(const fs::path& file, const std::string& contents) {
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot open for writing");
    out << contents;
    if (!out) throw std::runtime_error(tmp.string() + ": write failed");
  }
  fs::rename(tmp, file);
}

void save_dataset(const MultiViewDataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    const Eigen::MatrixXd& x = data.views[v];
    std::string text;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (j > 0) text += ',';
        text += format_double(x(i, j));
      }
      text += '\n';
    }
    write_file_atomic(dir / ("view" + std::to_string(v + 1) + ".csv"), text);
  }
  if (data.labels) {
    std::string text;
    for (const int id : *data.labels) text += std::to_string(id) + '\n';
    write_file_atomic(dir / "labels.csv", text);
  }
}

}  // namespace mvgl

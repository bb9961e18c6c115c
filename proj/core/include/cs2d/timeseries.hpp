#pragma once

#include <string>
#include <vector>

namespace cs2d {

/// Columnar record on a strictly increasing time axis. Each column carries
/// a unit string.
class TimeSeries {
public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> names,
                      std::vector<std::string> units = {});

  void append(double t, const std::vector<double>& row);
  void add_column(const std::string& name, std::vector<double> values,
                  const std::string& unit = "");

  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& column(const std::string& name) const;
  bool has(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }
  const std::string& unit(const std::string& name) const;
  std::size_t size() const { return t_.size(); }

  /// Throws InvalidConfig if t is not strictly increasing or lengths differ.
  void validate() const;

  /// Copy with `name` multiplied by `factor`.
  TimeSeries scaled(const std::string& name, double factor) const;

private:
  std::size_t index_of(const std::string& name) const;

  std::vector<double> t_;
  std::vector<std::string> names_;
  std::vector<std::string> units_;
  std::vector<std::vector<double>> cols_;
};

}  // namespace cs2d

#include "cs2d/timeseries.hpp"

#include "cs2d/errors.hpp"

namespace cs2d {

TimeSeries::TimeSeries(std::vector<std::string> names,
                       std::vector<std::string> units)
    : names_(std::move(names)), units_(std::move(units)) {
  units_.resize(names_.size());
  cols_.resize(names_.size());
}

void TimeSeries::append(double t, const std::vector<double>& row) {
  if (row.size() != names_.size())
    throw InvalidConfig("row", "width does not match the column count");
  if (!t_.empty() && !(t > t_.back()))
    throw InvalidConfig("t", "must be strictly increasing");
  t_.push_back(t);
  for (std::size_t i = 0; i < row.size(); ++i) cols_[i].push_back(row[i]);
}

void TimeSeries::add_column(const std::string& name,
                            std::vector<double> values,
                            const std::string& unit) {
  if (has(name)) throw InvalidConfig(name, "column already exists");
  if (!t_.empty() && values.size() != t_.size())
    throw InvalidConfig(name, "length does not match the time axis");
  names_.push_back(name);
  units_.push_back(unit);
  cols_.push_back(std::move(values));
}

std::size_t TimeSeries::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw InvalidConfig(name, "no such column");
}

const std::vector<double>& TimeSeries::column(const std::string& name) const {
  return cols_[index_of(name)];
}

bool TimeSeries::has(const std::string& name) const {
  for (const auto& n : names_)
    if (n == name) return true;
  return false;
}

const std::string& TimeSeries::unit(const std::string& name) const {
  return units_[index_of(name)];
}

void TimeSeries::validate() const {
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1]))
      throw InvalidConfig("t", "must be strictly increasing");
  for (std::size_t i = 0; i < cols_.size(); ++i)
    if (cols_[i].size() != t_.size())
      throw InvalidConfig(names_[i], "length does not match the time axis");
}

TimeSeries TimeSeries::scaled(const std::string& name, double factor) const {
  TimeSeries out = *this;
  for (double& v : out.cols_[index_of(name)]) v *= factor;
  return out;
}

}  // namespace cs2d

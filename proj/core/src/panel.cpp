#include "kinnet/panel.hpp"

#include "kinnet/csv.hpp"
#include "kinnet/names.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace kinnet {

std::optional<double> PanelRow::value(std::string_view column) const {
  if (column == "acc") return acc;
  if (column == "ccd") return ccd;
  if (column == "cgc") return cgc;
  if (column == "log_hhi") return log_hhi;
  if (column == "pov") return pov;
  if (column == "hdi") return hdi;
  if (column == "pov_lag_3year") return pov_lag_3year;
  if (column == "hdi_lag_3year") return hdi_lag_3year;
  throw std::invalid_argument("PanelRow: unknown column '" + std::string(column) + "'");
}

std::vector<int> PanelFrame::years() const {
  std::set<int> years;
  for (const auto& row : rows) years.insert(row.year);
  return {years.begin(), years.end()};
}

PanelFrame build_panel(const std::vector<IndicatorRow>& indicators,
                       const std::vector<SocioRow>& socio, int first_year,
                       int last_year, int lag_years, double log_base) {
  std::map<std::pair<std::string, int>, const SocioRow*> socio_index;
  std::set<std::string> socio_provinces;
  for (const auto& row : socio) {
    socio_index[{row.province, row.year}] = &row;
    socio_provinces.insert(row.province);
  }

  std::set<std::string> indicator_provinces;
  for (const auto& row : indicators) indicator_provinces.insert(row.province);
  if (!indicator_provinces.empty()) {
    std::size_t missing = 0;
    for (const auto& province : indicator_provinces) {
      if (!socio_provinces.count(province)) ++missing;
    }
    const double rate =
        static_cast<double>(missing) / static_cast<double>(indicator_provinces.size());
    if (rate > 0.10) {
      throw std::runtime_error(
          "build_panel: " + std::to_string(missing) + " of " +
          std::to_string(indicator_provinces.size()) +
          " indicator provinces have no socio rows; naming schemes likely differ");
    }
  }

  const double log_divisor = log_base > 0.0 ? std::log(log_base) : 1.0;

  PanelFrame frame;
  for (const auto& ind : indicators) {
    if (ind.year < first_year || ind.year > last_year) continue;
    auto socio_it = socio_index.find({ind.province, ind.year});
    if (socio_it == socio_index.end()) continue; // inner join

    PanelRow row;
    row.province = ind.province;
    row.year = ind.year;
    row.acc = ind.acc;
    row.ccd = ind.ccd;
    row.cgc = ind.cgc;
    if (ind.hhi > 0.0) row.log_hhi = std::log(ind.hhi) / log_divisor;
    row.pov = socio_it->second->pov;
    row.hdi = socio_it->second->hdi;
    auto lag_it = socio_index.find({ind.province, ind.year - lag_years});
    if (lag_it != socio_index.end()) {
      row.pov_lag_3year = lag_it->second->pov;
      row.hdi_lag_3year = lag_it->second->hdi;
    }
    frame.rows.push_back(std::move(row));
  }
  std::sort(frame.rows.begin(), frame.rows.end(), [](const PanelRow& a, const PanelRow& b) {
    return std::tie(a.province, a.year) < std::tie(b.province, b.year);
  });
  return frame;
}

std::vector<SocioRow> read_socio_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  auto required = [&](const char* name) {
    const int idx = table.column(name);
    if (idx < 0) {
      throw std::runtime_error(path + ": missing required column '" + std::string(name) + "'");
    }
    return idx;
  };
  const int c_province = required("province");
  const int c_year = required("year");
  const int c_pov = required("pov");
  const int c_hdi = required("hdi");

  std::vector<SocioRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& fields : table.rows) {
    SocioRow row;
    row.province = normalize_name(fields[static_cast<std::size_t>(c_province)]);
    row.year = std::stoi(fields[static_cast<std::size_t>(c_year)]);
    const auto& pov = fields[static_cast<std::size_t>(c_pov)];
    const auto& hdi = fields[static_cast<std::size_t>(c_hdi)];
    if (!pov.empty()) row.pov = std::stod(pov);
    if (!hdi.empty()) row.hdi = std::stod(hdi);
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace kinnet

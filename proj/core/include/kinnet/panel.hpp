#pragma once

#include "kinnet/indicators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kinnet {

struct SocioRow {
  std::string province;
  int year = 0;
  std::optional<double> pov;
  std::optional<double> hdi;
};

struct PanelRow {
  std::string province;
  int year = 0;
  std::optional<double> acc, ccd, cgc, log_hhi;
  std::optional<double> pov, hdi;
  std::optional<double> pov_lag_3year, hdi_lag_3year;

  std::optional<double> value(std::string_view column) const;
};

/// Rectangular (province, year) frame joining indicators with the
/// socioeconomic table, restricted to the regression years; lag columns
/// carry the same province's socio value from three years earlier. Rows with
/// missing columns are kept; each regression applies listwise deletion.
struct PanelFrame {
  std::vector<PanelRow> rows; // province asc, year asc
  std::vector<int> years() const;
};

/// Inner join of indicators and socio rows on (province, year). Indicator
/// years outside [first_year, last_year] are dropped (the regression window
/// trims 2022 and keeps 2007-2019). log_base = 0 selects the natural log for
/// log_hhi. Throws when more than 10% of the indicator provinces have no
/// socio data at all (naming-scheme drift).
PanelFrame build_panel(const std::vector<IndicatorRow>& indicators,
                       const std::vector<SocioRow>& socio,
                       int first_year = 2007, int last_year = 2019,
                       int lag_years = 3, double log_base = 0.0);

std::vector<SocioRow> read_socio_csv(const std::string& path);

} // namespace kinnet

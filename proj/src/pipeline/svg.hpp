#pragma once

#include "tsclust/cluster_model.hpp"
#include "tsclust/timeseries.hpp"
#include "tsclust/validation.hpp"

#include <string>
#include <string_view>

namespace tsclust::svg {

/// One panel per cluster: member traces in grey, the center in red.
std::string cluster_panels(const Dataset& dataset, const ClusterModel& model, std::string_view title);

/// Contingency counts as a shaded grid; matched consensus cells are outlined.
std::string agreement_heatmap(const AgreementReport& report, std::string_view row_title,
                              std::string_view column_title);

}  // namespace tsclust::svg

#include "vortexsim/errors.hpp"
#include "vortexsim/image_io.hpp"
#include "vortexsim/scenario.hpp"

#include "json.hpp"

#include <filesystem>

namespace vortexsim
{

using Json = nlohmann::ordered_json;

namespace
{

Json gridJson(const GridSpec& g)
{
  return Json{{"nx", g.nx}, {"ny", g.ny}, {"pitch_m", g.pitch}, {"wavelength_m", g.wavelength}};
}

Json samplingJson(const SamplingReport& s)
{
  Json checks = Json::array();
  for (const GuardCheck& c : s.checks)
    checks.push_back(Json{{"name", c.name},
                          {"status", toString(c.status)},
                          {"ratio", c.value},
                          {"message", c.message}});
  return Json{{"status", toString(s.status)}, {"checks", checks}};
}

Json windingJson(const std::optional<WindingResult>& w, const std::string& error)
{
  if (!w)
    return Json{{"value", nullptr}, {"error", error}};
  return Json{{"value", w->winding}, {"residual", w->residual}, {"radius_m", w->radius}};
}

Json spectrumJson(const OAMSpectrum& s)
{
  return Json{{"center_m", Json::array({s.center.x, s.center.y})},
              {"q_min", s.qRange.min},
              {"q_max", s.qRange.max},
              {"dominant_q", s.dominantQ},
              {"total_fraction", s.total()},
              {"power_fraction", s.powerFraction}};
}

Json beamJson(const BeamAnalysis& b)
{
  return Json{{"center_m", Json::array({b.center.x, b.center.y})},
              {"max_radius_m", b.maxRadius},
              {"dominant_q", b.spectrum.dominantQ},
              {"dominant_fraction", b.spectrum.fraction(b.spectrum.dominantQ)},
              {"winding", windingJson(b.winding, b.windingError)},
              {"ring_found", b.ring.found},
              {"ring_radius_m", b.ring.radius},
              {"peak_count", b.peakCount},
              {"spectrum", spectrumJson(b.spectrum)}};
}

double totalOrderPower(const DiffractionReport& d)
{
  double total = 0.0;
  for (const OrderMeasurement& o : d.orders)
    if (o.inGrid)
      total += o.integratedPower;
  return total;
}

Json diffractionJson(const DiffractionReport& d)
{
  const double total = totalOrderPower(d);
  Json orders = Json::array();
  for (const OrderMeasurement& o : d.orders) {
    Json j{{"order", o.order}, {"center_m", Json::array({o.center.x, o.center.y})}, {"in_grid", o.inGrid}};
    if (o.inGrid) {
      j["integrated_power"] = o.integratedPower;
      j["relative_power"] = total > 0.0 ? o.integratedPower / total : 0.0;
      j["on_axis_intensity"] = o.onAxisIntensity;
      j["ring_found"] = o.ring.found;
      j["ring_radius_m"] = o.ring.radius;
      j["peak_count"] = o.peakCount;
      j["winding"] = windingJson(o.winding, o.windingError);
      j["dominant_q"] = o.dominantQ;
      j["dominant_fraction"] = o.dominantFraction;
    }
    orders.push_back(std::move(j));
  }
  Json asym = Json::array();
  for (const AsymmetryEntry& a : d.asymmetries)
    asym.push_back(Json{{"order", a.order}, {"value", a.value}});
  return Json{{"order_spacing_m", d.orderSpacing},
              {"box_half_width_m", d.boxHalfWidth},
              {"orders", orders},
              {"asymmetries", asym}};
}

Json sortJson(const SortOutcome& s)
{
  Json j;
  if (s.result) {
    const SortResult& r = *s.result;
    Json per = Json::array();
    for (const OrderTransmission& t : r.perOrder)
      per.push_back(Json{{"order", t.order}, {"raw", t.raw}, {"order_power", t.orderPower}, {"score", t.score}});
    j = Json{{"m_hat", r.mHat}, {"best_order", r.bestOrder}, {"confidence", r.confidence}, {"per_order", per}};
  } else {
    j = Json{{"m_hat", nullptr},
             {"error", s.error},
             {"candidates", s.candidates},
             {"candidate_orders", s.candidateOrders}};
  }
  return j;
}

Json reportJson(const RunReport& report, bool timings)
{
  Json runs = Json::array();
  for (const RunRecord& r : report.runs) {
    Json j{{"charge", r.charge},
           {"output_grid", gridJson(r.outputGrid)},
           {"input_power", r.inputPower},
           {"output_power", r.outputPower}};
    if (r.diffraction) {
      j["diffraction"] = diffractionJson(*r.diffraction);
      Json spectra = Json::array();
      for (const OrderMeasurement& o : r.diffraction->orders)
        if (o.inGrid)
          spectra.push_back(Json{{"order", o.order}, {"spectrum", spectrumJson(o.spectrum)}});
      j["spectra"] = spectra;
    }
    if (r.beam)
      j["beam"] = beamJson(*r.beam);
    if (r.incident)
      j["incident"] = Json{{"charge", r.incident->charge},
                           {"distance_m", r.incident->distance},
                           {"sampling", samplingJson(r.incident->sampling)},
                           {"analysis", beamJson(r.incident->analysis)}};
    if (r.sort)
      j["sort"] = sortJson(*r.sort);
    if (timings) {
      Json t = Json::object();
      for (const auto& [stage, ms] : r.timingsMs)
        t[stage] = ms;
      j["timings_ms"] = t;
    }
    runs.push_back(std::move(j));
  }
  return Json{{"scenario", report.config.name},
              {"config", echoScenarioConfig(report.config)},
              {"input_grid", gridJson(report.config.gridSpec())},
              {"sampling", samplingJson(report.sampling)},
              {"runs", runs}};
}

} // namespace

std::string renderReport(const RunReport& report, bool timings)
{
  return reportJson(report, timings).dump(2) + "\n";
}

void writeReport(const RunReport& report, const std::string& path)
{
  writeFileAtomic(path, renderReport(report));
}

void writeArtifacts(const RunReport& report)
{
  const std::filesystem::path dir(report.config.output.directory);
  auto path = [&](const char* file) { return (dir / file).string(); };

  writeReport(report, path("report.json"));
  writeFileAtomic(path("config.ini"), echoScenarioConfig(report.config));

  CsvTable orders{{"charge", "order", "center_x_m", "integrated_power", "relative_power",
                   "on_axis_intensity", "ring_radius_m", "peak_count", "winding", "dominant_q",
                   "dominant_fraction"},
                  {}};
  CsvTable asym{{"charge", "order", "asymmetry"}, {}};
  CsvTable spectra{{"charge", "order", "q", "power_fraction"}, {}};
  CsvTable sorts{{"charge", "m_hat", "best_order", "confidence", "error"}, {}};
  CsvTable sortOrders{{"charge", "order", "raw", "order_power", "score"}, {}};

  for (const RunRecord& r : report.runs) {
    const std::string m = std::to_string(r.charge);
    if (r.diffraction) {
      const double total = totalOrderPower(*r.diffraction);
      for (const OrderMeasurement& o : r.diffraction->orders) {
        if (!o.inGrid)
          continue;
        orders.rows.push_back({m, std::to_string(o.order), formatNumber(o.center.x),
                               formatNumber(o.integratedPower),
                               formatNumber(total > 0.0 ? o.integratedPower / total : 0.0),
                               formatNumber(o.onAxisIntensity), formatNumber(o.ring.radius),
                               std::to_string(o.peakCount),
                               o.winding ? std::to_string(o.winding->winding) : std::string(),
                               std::to_string(o.dominantQ), formatNumber(o.dominantFraction)});
        for (int q = o.spectrum.qRange.min; q <= o.spectrum.qRange.max; ++q)
          spectra.rows.push_back({m, std::to_string(o.order), std::to_string(q),
                                  formatNumber(o.spectrum.fraction(q))});
      }
      for (const AsymmetryEntry& a : r.diffraction->asymmetries)
        asym.rows.push_back({m, std::to_string(a.order), formatNumber(a.value)});
    }
    if (r.beam)
      for (int q = r.beam->spectrum.qRange.min; q <= r.beam->spectrum.qRange.max; ++q)
        spectra.rows.push_back({m, "", std::to_string(q), formatNumber(r.beam->spectrum.fraction(q))});
    if (r.sort) {
      if (r.sort->result) {
        const SortResult& s = *r.sort->result;
        sorts.rows.push_back({m, std::to_string(s.mHat), std::to_string(s.bestOrder),
                              formatNumber(s.confidence), ""});
        for (const OrderTransmission& t : s.perOrder)
          sortOrders.rows.push_back({m, std::to_string(t.order), formatNumber(t.raw),
                                     formatNumber(t.orderPower), formatNumber(t.score)});
      } else {
        sorts.rows.push_back({m, "", "", "", "ambiguous"});
      }
    }
  }

  if (!orders.rows.empty()) {
    writeCsv(path("orders.csv"), orders);
    writeCsv(path("asymmetry.csv"), asym);
  }
  if (!spectra.rows.empty())
    writeCsv(path("spectra.csv"), spectra);
  if (!sorts.rows.empty()) {
    writeCsv(path("sort.csv"), sorts);
    writeCsv(path("sort_orders.csv"), sortOrders);
  }
}

} // namespace vortexsim

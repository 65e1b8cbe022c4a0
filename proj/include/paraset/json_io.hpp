#ifndef PARASET_JSON_IO_HPP
#define PARASET_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "paraset/analysis.hpp"
#include "paraset/construction.hpp"
#include "paraset/fractal.hpp"
#include "paraset/geometry.hpp"

namespace paraset {

using Json = nlohmann::json;

/// 17-significant-digit decimal string; parses back to the identical double.
std::string format_real(double v);
double parse_real(const Json& j);

Json geometry_to_json(const Geometry2D& g);
Geometry2D geometry_from_json(const Json& j);

Json set1d_to_json(const Set1D& a);
Set1D set1d_from_json(const Json& j);

Json target_radii_to_json(const TargetRadii& n);
TargetRadii target_radii_from_json(const Json& j);

Json construction_to_json(const Construction2D& c);
Json full_construction_to_json(const FullConstruction2D& fc);
Json box_construction_to_json(const BoxConstruction& bc);
Json condition_report_to_json(const ConditionReport& r);
Json integral_report_to_json(const IntegralReport& r);
Json nondiff_report_to_json(const NondiffReport& r);
Json criticality_report_to_json(const CriticalityReport& r);
Json convergence_report_to_json(const ConvergenceReport& r);

std::string volume_csv(const VolumeSamples& vs);
std::string derivatives_csv(const VolumeSamples& vs, const std::vector<DerivativeEstimate>& es);
std::string cloud_csv(const SurfaceCloud& cloud);
std::string tail_gap_csv(const TargetRadii& n, const std::vector<double>& radii, int depth = 0);

/// Binary field dump: magic "PSETFLD1", origin, h, dims, then row-major
/// doubles; reproducible bit for bit.
void write_field_dump(const std::string& path, const DistanceField& f);
DistanceField read_field_dump(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
Json read_json_file(const std::string& path);

}  // namespace paraset

#endif

// Command-line front end: construct / analyze / verify / gallery / convergence.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "paraset/acceptance.hpp"
#include "paraset/analysis.hpp"
#include "paraset/construction.hpp"
#include "paraset/json_io.hpp"

namespace fs = std::filesystem;
using namespace paraset;

namespace {

std::vector<double> parse_radii(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::strtod(tok.c_str(), nullptr));
    }
    require(!out.empty(), Errc::InvalidArgument, "no radii given");
    return out;
}

// Named oracle geometries: rectboundary:s, disk:r, twopoints:d, or a JSON file.
Geometry2D load_geometry(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        std::string kind = spec.substr(0, colon);
        double p = std::strtod(spec.c_str() + colon + 1, nullptr);
        if (kind == "rectboundary") {
            Rect box{0.0, 3.0 * p, 0.0, 2.0 * p};
            return Geometry2D::difference(RectPrim{box}, std::vector<Primitive2D>{RectPrim{box}});
        }
        if (kind == "disk") return Geometry2D::leaf(DiskPrim{{0.0, 0.0}, p});
        if (kind == "twopoints")
            return Geometry2D::leaf(PointSetPrim{{{-p / 2, 0.0}, {p / 2, 0.0}}});
        fail(Errc::UnknownKind, "unknown named geometry: " + kind);
    }
    return geometry_from_json(read_json_file(spec));
}

void emit(const fs::path& dir, const std::string& name, const std::string& content) {
    fs::create_directories(dir);
    write_text_file((dir / name).string(), content);
    std::cout << "wrote " << (dir / name).string() << "\n";
}

Json error_record(const Error& e) {
    Json j;
    j["error"] = e.what();
    j["code"] = static_cast<int>(e.code());
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parallel-set volume toolkit"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::uint64_t seed = 1;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized audits");

    // construct
    auto* cmd_construct = app.add_subcommand("construct", "build a realizing compact set");
    int dim = 1;
    std::string radii_csv;
    double gamma0 = -1.0, eps = 0.0;
    int max_level = -1;
    int boxes_dim = 0;
    cmd_construct->add_option("--dim", dim, "ambient dimension (1 or 2)");
    cmd_construct->add_option("--radii", radii_csv, "prescribed radii, comma separated")->required();
    cmd_construct->add_option("--gamma0", gamma0, "gamma scale (2D construction)");
    cmd_construct->add_option("--eps", eps, "lower bound for the eps-construction");
    cmd_construct->add_option("--max-level", max_level, "dyadic bands for the full construction");
    cmd_construct->add_option("--boxes-dim", boxes_dim, "emit the box construction for this dimension");

    // analyze
    auto* cmd_analyze = app.add_subcommand("analyze", "volume, derivative and criticality reports");
    std::string geom_spec;
    double h = 0.002, band_lo = 0.05, band_hi = 1.0, threshold = 0.0;
    bool dump_grid = false;
    cmd_analyze->add_option("--geometry", geom_spec, "JSON file or named oracle")->required();
    cmd_analyze->add_option("--h", h, "grid spacing");
    cmd_analyze->add_option("--band", band_lo, "band lower end");
    cmd_analyze->add_option("--band-hi", band_hi, "band upper end");
    cmd_analyze->add_option("--threshold", threshold, "jump detection threshold (0: automatic)");
    cmd_analyze->add_flag("--dump-grid", dump_grid, "write the binary distance-field dump");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run the acceptance suite");
    std::vector<int> only;
    cmd_verify->add_option("--only", only, "criterion ids to run");

    // gallery
    auto* cmd_gallery = app.add_subcommand("gallery", "Cantor-gallery tables and condition reports");
    double q = 1.0 / 9.0, alpha = 0.5;
    int depth = 14;
    cmd_gallery->add_option("--q", q, "contraction ratio in (0, 1/2)");
    cmd_gallery->add_option("--alpha", alpha, "gap-sum exponent");
    cmd_gallery->add_option("--depth", depth, "truncation depth");

    // convergence
    auto* cmd_conv = app.add_subcommand("convergence", "weak-convergence tables");
    std::string conv_geom;
    double r0 = 0.5, delta = 0.2;
    int kmax = 6;
    double conv_h = 0.002;
    cmd_conv->add_option("--geometry", conv_geom, "JSON file or named oracle")->required();
    cmd_conv->add_option("--r0", r0, "center radius");
    cmd_conv->add_option("--delta", delta, "schedule width");
    cmd_conv->add_option("--k", kmax, "schedule depth");
    cmd_conv->add_option("--h", conv_h, "grid spacing");

    CLI11_PARSE(app, argc, argv);
    fs::path dir(out_dir);

    try {
        if (*cmd_construct) {
            std::vector<double> radii = parse_radii(radii_csv);
            TargetRadii n = TargetRadii::from_values(radii);
            if (boxes_dim > 0) {
                BoxConstruction bc = construct_boxes_dimd(n, boxes_dim);
                emit(dir, "boxes.json", box_construction_to_json(bc).dump(2));
            } else if (dim == 1) {
                Set1D a = construct_dim1(n);
                emit(dir, "set1d.json", set1d_to_json(a).dump(2));
            } else if (max_level >= 0) {
                GammaPolicy pol;
                pol.gamma0 = gamma0;
                FullConstruction2D fc = construct_dim2_full(n, max_level, pol);
                emit(dir, "construction_full.json", full_construction_to_json(fc).dump(2));
                emit(dir, "geometry.json", geometry_to_json(fc.geometry).dump(2));
            } else {
                GammaPolicy pol;
                pol.gamma0 = gamma0;
                Construction2D c = construct_dim2_eps(n, pol, eps);
                emit(dir, "construction.json", construction_to_json(c).dump(2));
                emit(dir, "geometry.json", geometry_to_json(c.geometry).dump(2));
            }
        } else if (*cmd_analyze) {
            Geometry2D g = load_geometry(geom_spec);
            DistanceField f = make_distance_field(g, h, band_hi + 3 * h);
            VolumeSamples vs = volume_function(f, radii_grid(band_lo, band_hi, h / 2));
            emit(dir, "volume.csv", volume_csv(vs));
            NondiffReport nd = detect_nondiff_verified(g, f, vs, threshold);
            emit(dir, "nondiff_report.json", nondiff_report_to_json(nd).dump(2));
            std::vector<DerivativeEstimate> es;
            DerivOptions opt;
            for (std::size_t i = opt.window + opt.gap; i + opt.window + opt.gap < vs.radii.size();
                 i += 4)
                es.push_back(one_sided_derivatives(vs, vs.radii[i], opt));
            emit(dir, "derivatives.csv", derivatives_csv(vs, es));
            Json crits = Json::array();
            for (const Detection& det : nd.detected)
                crits.push_back(
                    criticality_report_to_json(characterize_differentiability(g, f, det.r)));
            emit(dir, "criticality_reports.json", crits.dump(2));
            double r_mid = 0.5 * (band_lo + band_hi);
            SurfaceCloud contour = extract_level_set(f, r_mid);
            attach_projections(contour, g);
            emit(dir, "contour.csv", cloud_csv(contour));
            if (dump_grid) {
                fs::create_directories(dir);
                write_field_dump((dir / "field.bin").string(), f);
                std::cout << "wrote " << (dir / "field.bin").string() << "\n";
            }
        } else if (*cmd_verify) {
            bool ok = true;
            auto print = [&](const accept::CriterionResult& r) {
                std::printf("criterion %d [%s]: %s (%.1f s)%s%s\n", r.id, r.name.c_str(),
                            r.pass ? "PASS" : "FAIL", r.seconds, r.detail.empty() ? "" : " - ",
                            r.detail.c_str());
                std::fflush(stdout);
            };
            auto results = accept::run_acceptance(seed, only, print);
            ok = accept::all_passed(results);
            return ok ? 0 : 1;
        } else if (*cmd_gallery) {
            CantorGallery gal = cantor_gallery(q, depth);
            Json j;
            j["q"] = format_real(q);
            j["alpha"] = format_real(alpha);
            j["depth"] = depth;
            ExtReal partial = gap_sum(fractal_string_of(gal.f_approx), alpha);
            ExtReal full = gap_sum(gal.string, alpha);
            ExtReal closed = gal.closed_form_gap_sum(alpha);
            j["gap_sum_truncated"] = partial.finite ? format_real(partial.value) : "inf";
            j["gap_sum_with_tail"] = full.finite ? format_real(full.value) : "inf";
            j["gap_sum_closed_form"] = closed.finite ? format_real(closed.value) : "inf";
            j["box_dimension_formula"] = format_real(std::log(2.0) / std::log(1.0 / q));
            j["conditions_endpoints"] = condition_report_to_json(check_dim2_conditions(
                gal.endpoints, 0.0, 2, depth));
            j["conditions_rearranged"] = condition_report_to_json(check_dim2_conditions(
                gal.rearranged, 0.0, 2, std::max(depth, 16)));
            emit(dir, "gallery.json", j.dump(2));
            std::vector<double> rs;
            for (int k = 1; k <= 40; ++k) rs.push_back(k * 0.025);
            emit(dir, "tail_gap_sums.csv", tail_gap_csv(gal.rearranged, rs, depth));
        } else if (*cmd_conv) {
            Geometry2D g = load_geometry(conv_geom);
            DistanceField f = make_distance_field(g, conv_h, r0 + delta + 3 * conv_h);
            ConvergenceReport rep = weak_convergence_report(g, f, r0, delta, kmax);
            emit(dir, "convergence.json", convergence_report_to_json(rep).dump(2));
            std::ostringstream csv;
            csv << "k,r_below,r_above,flat_below,flat_above,mass_below,mass_above\n";
            for (const ConvergenceRow& row : rep.rows)
                csv << row.k << ',' << format_real(row.r_below) << ',' << format_real(row.r_above)
                    << ',' << format_real(row.flat_below) << ',' << format_real(row.flat_above)
                    << ',' << format_real(row.mass_below) << ',' << format_real(row.mass_above)
                    << '\n';
            emit(dir, "convergence.csv", csv.str());
        }
    } catch (const Error& e) {
        std::cerr << error_record(e).dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return 2;
    }
    return 0;
}

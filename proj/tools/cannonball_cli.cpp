// Command-line front end for the cannonball-distance toolkit.
//
// Subcommands: seq, avg, twist, equi, series, fit, verify.  Output is CSV
// (default) or JSON mirroring the same rows; `fit` can also emit
// gnuplot-compatible two-column data and a static SVG of the log-log fit.
//
// Exit codes: 0 success, 1 criterion failure, 2 usage error, 3 resource
// error, 4 data-format error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cannonball/cannonball.hpp"

using namespace cannonball;
using nlohmann::json;

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void emit(const Table& t, RunConfig::Format format, std::ostream& os) {
    if (format == RunConfig::Format::csv) {
        os << join_csv(t.header) << '\n';
        for (const auto& row : t.rows) os << join_csv(row) << '\n';
        return;
    }
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            obj[t.header[i]] = row[i];
        }
        arr.push_back(obj);
    }
    os << arr.dump(2) << '\n';
}

std::vector<u64> expand_xs(std::vector<u64> xs, const std::optional<std::pair<int, int>>& dec) {
    if (dec) {
        for (int e = dec->first; e <= dec->second; ++e) {
            u64 v = 1;
            for (int i = 0; i < e; ++i) v *= 10;
            xs.push_back(v);
        }
    }
    if (xs.empty()) throw ParameterError("no --x values given (use --x or --decades)");
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

std::optional<std::pair<int, int>> parse_decades(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ParameterError("--decades expects LO:HI (powers of ten)");
    return std::make_pair(std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1)));
}

std::string cache_path_or_env(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    const char* env = std::getenv("CANNONBALL_CACHE");
    return env ? std::string(env) : std::string();
}

void write_plot_data(const std::string& path,
                     const std::vector<std::pair<double, double>>& pts) {
    std::ofstream os(path);
    if (!os) throw ResourceError("cannot open plot file " + path);
    for (const auto& [x, y] : pts) os << format_double(x) << ' ' << format_double(y) << '\n';
}

// Minimal static SVG: log-log scatter plus the fitted line.
void write_svg(const std::string& path, const std::vector<std::pair<double, double>>& pts,
               const FitResult& fit) {
    const double W = 640, H = 480, M = 60;
    double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    for (const auto& [x, y] : pts) {
        lx0 = std::min(lx0, std::log10(x));
        lx1 = std::max(lx1, std::log10(x));
        ly0 = std::min(ly0, std::log10(y));
        ly1 = std::max(ly1, std::log10(y));
    }
    if (lx1 - lx0 < 1e-9) lx1 = lx0 + 1;
    if (ly1 - ly0 < 1e-9) ly1 = ly0 + 1;
    auto px = [&](double lx) { return M + (lx - lx0) / (lx1 - lx0) * (W - 2 * M); };
    auto py = [&](double ly) { return H - M - (ly - ly0) / (ly1 - ly0) * (H - 2 * M); };

    std::ofstream os(path);
    if (!os) throw ResourceError("cannot open svg file " + path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<line x1='" << M << "' y1='" << H - M << "' x2='" << W - M << "' y2='" << H - M
       << "' stroke='black'/>\n";
    os << "<line x1='" << M << "' y1='" << M << "' x2='" << M << "' y2='" << H - M
       << "' stroke='black'/>\n";
    for (const auto& [x, y] : pts) {
        os << "<circle cx='" << px(std::log10(x)) << "' cy='" << py(std::log10(y))
           << "' r='4' fill='steelblue'/>\n";
    }
    const double ln10 = std::log(10.0);
    auto fit_ly = [&](double lx) {
        return (fit.intercept + fit.slope * lx * ln10) / ln10;
    };
    os << "<line x1='" << px(lx0) << "' y1='" << py(fit_ly(lx0)) << "' x2='" << px(lx1)
       << "' y2='" << py(fit_ly(lx1)) << "' stroke='crimson' stroke-dasharray='6,3'/>\n";
    os << "<text x='" << W / 2 << "' y='" << H - 16
       << "' text-anchor='middle' font-family='monospace'>log10 x</text>\n";
    os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-family='monospace'>"
       << "slope " << format_double(fit.slope) << ", r^2 " << format_double(fit.r_squared)
       << "</text>\n";
    os << "</svg>\n";
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"cannonball-distance sequence toolkit"};
    app.require_subcommand(1);

    RunConfig config;
    std::string format_str = "csv";
    std::string cache_flag;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--workers", config.worker_count, "worker threads")->check(CLI::Range(1u, 256u));
        cmd->add_option("--format", format_str, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--budget", config.memory_budget_bytes, "memory budget in bytes");
        cmd->add_option("--precision-bits", config.precision_bits,
                        "fixed-point bits for fractional parts [16,256]");
    };

    // --- seq ---------------------------------------------------------------
    auto* seq = app.add_subcommand("seq", "generate a_n (or b_n) and optionally cache them");
    u64 seq_x = 1000;
    bool seq_convolved = false, seq_from_cache = false;
    seq->add_option("--x", seq_x, "generate n in [0, x]")->required();
    seq->add_flag("--convolved", seq_convolved, "emit b_n = sum_{d|n} a_d instead of records");
    seq->add_flag("--from-cache", seq_from_cache, "read records back from the cache file");
    seq->add_option("--cache", cache_flag, "binary cache path (env CANNONBALL_CACHE)");
    add_common(seq);

    // --- avg ---------------------------------------------------------------
    auto* avg = app.add_subcommand("avg", "averages A(x) and A(b,q,x) with main terms");
    std::vector<u64> avg_xs;
    std::string avg_decades;
    u64 avg_q = 1, avg_b = 0;
    avg->add_option("--x", avg_xs, "cutoffs (repeatable)");
    avg->add_option("--decades", avg_decades, "LO:HI powers of ten");
    avg->add_option("--q", avg_q, "modulus (default 1: plain average)");
    avg->add_option("--b", avg_b, "residue");
    add_common(avg);

    // --- twist -------------------------------------------------------------
    auto* twist = app.add_subcommand("twist", "character-twisted sums sum a_n chi(n)");
    std::vector<u64> twist_xs;
    std::string twist_decades;
    u64 twist_q = 3;
    int twist_chi = -1;
    twist->add_option("--q", twist_q, "modulus")->required();
    twist->add_option("--x", twist_xs, "cutoffs (repeatable)");
    twist->add_option("--decades", twist_decades, "LO:HI powers of ten");
    twist->add_option("--chi", twist_chi, "character index (default: all)");
    add_common(twist);

    // --- equi --------------------------------------------------------------
    auto* equi = app.add_subcommand("equi", "discrepancy and exponential-sum bounds");
    u64 equi_start = 1, equi_q = 1, equi_b = 0, equi_N = 1000, equi_K = 100;
    u64 equi_end = 0;
    std::vector<u64> equi_ms;
    bool equi_kn = false;
    equi->add_option("--start", equi_start, "first index");
    equi->add_option("--q", equi_q, "modulus");
    equi->add_option("--b", equi_b, "residue");
    equi->add_option("--N", equi_N, "family size");
    equi->add_option("--K", equi_K, "Erdos-Turan frequency cutoff");
    equi->add_flag("--kn", equi_kn, "second-derivative bound over [start,end]");
    equi->add_option("--end", equi_end, "block end (with --kn)");
    equi->add_option("--m", equi_ms, "frequencies for --kn (repeatable)");
    add_common(equi);

    // --- series ------------------------------------------------------------
    auto* series = app.add_subcommand("series", "zeta, F/G/H/F_chi partial sums, probes, Cesaro");
    std::string series_kind = "F";
    std::vector<double> series_s;
    std::vector<u64> series_xs;
    u64 series_N = 100000;
    u64 series_q = 3;
    int series_chi = 0;
    series->add_option("--kind", series_kind,
                       "zeta|F|G|H|Fvia|Fchi|cesaro|probe-f|probe-h")
        ->check(CLI::IsMember({"zeta", "F", "G", "H", "Fvia", "Fchi", "cesaro", "probe-f",
                               "probe-h"}));
    series->add_option("--s", series_s, "argument(s) (repeatable)");
    series->add_option("--N", series_N, "truncation index");
    series->add_option("--x", series_xs, "Cesaro cutoffs (repeatable)");
    series->add_option("--q", series_q, "modulus for Fchi");
    series->add_option("--chi", series_chi, "character index for Fchi");
    add_common(series);

    // --- fit ---------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "log-log exponent regression on an emitted table");
    std::string fit_input, fit_xcol = "x", fit_ycol, fit_plot, fit_svg;
    fit->add_option("--input", fit_input, "CSV file ('-' for stdin)")->required();
    fit->add_option("--x-col", fit_xcol, "x column name");
    fit->add_option("--y-col", fit_ycol, "y column name")->required();
    fit->add_option("--plot", fit_plot, "write gnuplot two-column data here");
    fit->add_option("--svg", fit_svg, "write a log-log SVG rendering here");
    add_common(fit);

    // --- verify ------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run the full verification suite");
    add_common(verify);

    app.parse(argc, argv);
    config.validate();
    config.output_format =
        format_str == "json" ? RunConfig::Format::json : RunConfig::Format::csv;
    const RunConfig::Format format = config.output_format;

    if (seq->parsed()) {
        Table t;
        config.cache_path = cache_path_or_env(cache_flag);
        const std::string& path = config.cache_path;
        if (seq_from_cache) {
            if (path.empty()) throw ParameterError("seq --from-cache needs --cache or CANNONBALL_CACHE");
            t.header = {"n", "a"};
            for (const auto& rec : cache_read(path)) {
                t.rows.push_back({format_u64(rec.n), format_u64(rec.a)});
            }
        } else if (seq_convolved) {
            auto b = b_sieve(seq_x, config.memory_budget_bytes, {}, config.worker_count);
            t.header = {"n", "b"};
            for (u64 n = 1; n <= seq_x; ++n)
                t.rows.push_back({format_u64(n), format_u64(b[static_cast<std::size_t>(n)])});
        } else {
            auto a = a_values(seq_x, config.worker_count, config.memory_budget_bytes);
            t.header = {"n", "P", "root", "a"};
            SequenceRange range(0, seq_x);
            while (range.has_next()) {
                const auto rec = range.next();
                t.rows.push_back({format_u64(rec.n), rec.P.get_str(), rec.root.get_str(),
                                  rec.a.get_str()});
            }
            if (!path.empty()) {
                std::vector<CacheRecord> records;
                records.reserve(a.size());
                for (u64 n = 0; n <= seq_x; ++n)
                    records.push_back({n, a[static_cast<std::size_t>(n)]});
                cache_write(path, records);
            }
        }
        emit(t, format, std::cout);
        return 0;
    }

    if (avg->parsed()) {
        const auto xs = expand_xs(avg_xs, parse_decades(avg_decades));
        auto a = a_values(xs.back(), config.worker_count, config.memory_budget_bytes);
        Table t;
        t.header = {"x", "q", "b", "raw_sum", "average", "main_term", "residual", "ratio"};
        for (u64 x : xs) {
            const AverageReport rep = avg_q == 1 && avg_b == 0
                                          ? average_a(a, x, config.worker_count)
                                          : average_a_ap(a, APQuery(avg_b, avg_q, x),
                                                         config.worker_count);
            t.rows.push_back({format_u64(rep.x), format_u64(rep.q), format_u64(rep.b),
                              rep.raw_sum.get_str(), format_double(rep.average),
                              format_double(rep.main_term), format_double(rep.residual),
                              format_double(rep.average / rep.main_term)});
        }
        emit(t, format, std::cout);
        return 0;
    }

    if (twist->parsed()) {
        const auto xs = expand_xs(twist_xs, parse_decades(twist_decades));
        auto a = a_values(xs.back(), config.worker_count, config.memory_budget_bytes);
        const auto chars = characters(twist_q);
        if (twist_chi >= static_cast<int>(chars.size()))
            throw ParameterError("twist: --chi out of range (phi(q) characters)");
        Table t;
        t.header = {"q", "char_index", "x", "re_S", "im_S", "main_term", "residual_abs"};
        for (std::size_t ci = 0; ci < chars.size(); ++ci) {
            if (twist_chi >= 0 && ci != static_cast<std::size_t>(twist_chi)) continue;
            for (u64 x : xs) {
                const auto rep = twisted_sum(chars[ci], a, x, config.worker_count);
                t.rows.push_back({format_u64(twist_q), format_u64(ci), format_u64(x),
                                  format_double(rep.value.real()),
                                  format_double(rep.value.imag()),
                                  format_double(rep.main_term),
                                  format_double(rep.residual_abs)});
            }
        }
        emit(t, format, std::cout);
        return 0;
    }

    if (equi->parsed()) {
        Table t;
        if (equi_kn) {
            if (equi_end <= equi_start) throw ParameterError("equi --kn needs --end > --start");
            if (equi_ms.empty()) equi_ms = {1};
            t.header = {"start", "end", "q", "m", "measured", "bound", "satisfied"};
            for (u64 m : equi_ms) {
                const auto cmp = kn_bound(equi_start, equi_end, equi_q, m, config.precision_bits);
                t.rows.push_back({format_u64(equi_start), format_u64(equi_end),
                                  format_u64(equi_q), format_u64(m),
                                  format_double(cmp.measured), format_double(cmp.bound),
                                  cmp.satisfied ? "1" : "0"});
            }
        } else {
            const UnitSample fam =
                frac_family(equi_start, equi_q, equi_b, equi_N, config.precision_bits);
            const auto cmp = erdos_turan_bound(fam, equi_K);
            t.header = {"N", "q", "b", "start", "D_star", "D", "ET_bound_K", "satisfied"};
            t.rows.push_back({format_u64(equi_N), format_u64(equi_q), format_u64(fam.meta.b),
                              format_u64(equi_start), format_double(star_discrepancy(fam)),
                              format_double(extreme_discrepancy(fam)),
                              format_double(cmp.bound), cmp.satisfied ? "1" : "0"});
        }
        emit(t, format, std::cout);
        return 0;
    }

    if (series->parsed()) {
        Table t;
        if (series_kind == "cesaro") {
            const auto xs = expand_xs(series_xs, std::nullopt);
            auto b = b_sieve(xs.back(), config.memory_budget_bytes, {}, config.worker_count);
            t.header = {"x", "S_numerator", "value", "main_term", "ratio"};
            for (u64 x : xs) {
                const CesaroReport rep = cesaro_B(x, b, config.worker_count);
                t.rows.push_back({format_u64(rep.x), rep.exact_numerator.get_str(),
                                  format_double(rep.value), format_double(rep.main_term),
                                  format_double(rep.ratio)});
            }
        } else if (series_kind == "zeta") {
            if (series_s.empty()) throw ParameterError("series --kind zeta needs --s");
            t.header = {"series_id", "s", "N", "re", "im"};
            for (double s : series_s) {
                t.rows.push_back({"zeta", format_double(s), "0",
                                  format_double(zeta_real(s, 1e-12)), "0"});
            }
        } else if (series_kind == "probe-f" || series_kind == "probe-h") {
            if (series_s.empty()) throw ParameterError("series probes need --s");
            auto a = a_values(series_N, config.worker_count, config.memory_budget_bytes);
            const auto rows = residue_probe(a, series_s, series_N,
                                            series_kind == "probe-f" ? ProbeKind::F
                                                                     : ProbeKind::H,
                                            config.worker_count);
            t.header = {"s", "N", "product", "target"};
            for (const auto& row : rows) {
                t.rows.push_back({format_double(row.s), format_u64(row.N),
                                  format_double(row.product), format_double(row.target)});
            }
        } else {
            if (series_s.empty()) throw ParameterError("series needs --s");
            auto a = a_values(series_N, config.worker_count, config.memory_budget_bytes);
            t.header = {"series_id", "s", "N", "re", "im"};
            for (double s : series_s) {
                PartialSeriesValue v;
                std::string id = series_kind;
                if (series_kind == "F") {
                    v = partial_F(a, s, series_N, config.worker_count);
                } else if (series_kind == "G") {
                    v = partial_G(a, s, series_N, config.worker_count);
                } else if (series_kind == "H") {
                    auto b = b_sieve(series_N, config.memory_budget_bytes, a,
                                     config.worker_count);
                    v = partial_H(b, s, series_N, config.worker_count);
                } else if (series_kind == "Fvia") {
                    v.s = s;
                    v.N = series_N;
                    v.value = {F_via_G(a, s, series_N, config.worker_count), 0.0};
                } else {  // Fchi
                    const auto chars = characters(series_q);
                    if (series_chi < 0 || series_chi >= static_cast<int>(chars.size()))
                        throw ParameterError("series Fchi: --chi out of range");
                    v = partial_F_chi(chars[static_cast<std::size_t>(series_chi)], a, s,
                                      series_N, config.worker_count);
                    id += ":" + chars[static_cast<std::size_t>(series_chi)].id();
                }
                t.rows.push_back({id, format_double(s), format_u64(series_N),
                                  format_double(v.value.real()),
                                  format_double(v.value.imag())});
            }
        }
        emit(t, format, std::cout);
        return 0;
    }

    if (fit->parsed()) {
        std::istream* in = &std::cin;
        std::ifstream file;
        if (fit_input != "-") {
            file.open(fit_input);
            if (!file) throw ResourceError("fit: cannot open " + fit_input);
            in = &file;
        }
        std::string line;
        if (!std::getline(*in, line)) throw FormatError("fit: empty input", 0);
        const auto header = split_csv_line(line);
        const auto find_col = [&](const std::string& name) {
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name) return i;
            throw FormatError("fit: column '" + name + "' not found", 0);
        };
        const std::size_t xi = find_col(fit_xcol);
        const std::size_t yi = find_col(fit_ycol);
        std::vector<std::pair<double, double>> pts;
        while (std::getline(*in, line)) {
            if (line.empty()) continue;
            const auto fields = split_csv_line(line);
            if (fields.size() != header.size())
                throw FormatError("fit: ragged CSV row", 0);
            pts.emplace_back(parse_double(fields[xi]), parse_double(fields[yi]));
        }
        const FitResult res = fit_exponent(pts);
        if (!fit_plot.empty()) write_plot_data(fit_plot, pts);
        if (!fit_svg.empty()) write_svg(fit_svg, pts, res);
        Table t;
        t.header = {"slope", "intercept", "r_squared", "points"};
        t.rows.push_back({format_double(res.slope), format_double(res.intercept),
                          format_double(res.r_squared), std::to_string(res.point_count)});
        emit(t, format, std::cout);
        return 0;
    }

    if (verify->parsed()) {
        const AcceptanceReport report = run_acceptance(config);
        if (format == RunConfig::Format::json) {
            json arr = json::array();
            for (const auto& r : report.results) {
                arr.push_back({{"id", r.id},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"measured", r.measured},
                               {"threshold", r.threshold}});
            }
            std::cout << arr.dump(2) << '\n';
        } else {
            std::cout << render_report(report);
        }
        return report.all_pass ? 0 : 1;
    }

    return 0;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "data-format error: " << e.what() << '\n';
        return 4;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

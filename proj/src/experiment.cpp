#include "depstat/experiment.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "depstat/textio.hpp"

namespace depstat {

namespace {

std::string rep_coords(int theta_idx, int n_idx, int d_idx, int rep) {
    return "-t" + std::to_string(theta_idx) + "-n" + std::to_string(n_idx) + "-d" +
           std::to_string(d_idx) + "-r" + std::to_string(rep);
}

// Datasets are addressed by grid point and repetition only, never by test:
// every test at a grid point consumes identical data (paired comparison).
bool repetition_accepts(const ExperimentGrid& grid, int theta_idx, int n_idx, int d_idx,
                        int test_idx, int rep) {
    const std::string coords = rep_coords(theta_idx, n_idx, d_idx, rep);
    const TestSpec& spec = grid.tests[static_cast<std::size_t>(test_idx)];

    MixConfig mix;
    mix.theta = grid.thetas[static_cast<std::size_t>(theta_idx)];
    mix.n = grid.ns[static_cast<std::size_t>(n_idx)];
    mix.d = grid.ds[static_cast<std::size_t>(d_idx)];
    if (grid.fresh_density_per_rep) {
        RngStream densities(grid.base_seed, "density" + coords);
        mix.density_x = kDensityCatalog[densities.uniform_below(kDensityCatalog.size())];
        mix.density_y = kDensityCatalog[densities.uniform_below(kDensityCatalog.size())];
    } else {
        mix.density_x = grid.density_x;
        mix.density_y = grid.density_y;
    }
    mix.seed = stream_key(grid.base_seed, "data" + coords);

    const PairedSample sample = generate_instance(mix);

    TestConfig config;
    config.alpha = grid.alpha;
    config.permutations = grid.permutations;
    config.null_model = spec.null_model;
    config.stat = spec.stat;
    config.seed = stream_key(grid.base_seed, "test-" + test_spec_name(spec) + coords);

    return !run_test(sample, config).reject;
}

}  // namespace

std::string test_spec_name(const TestSpec& spec) {
    return std::string(stat_kind_name(spec.stat)) + "-" +
           std::string(null_model_name(spec.null_model));
}

TestSpec parse_test_spec(std::string_view token) {
    TestSpec spec;
    if (token.ends_with("-permutation")) {
        spec.null_model = NullModel::Permutation;
        token.remove_suffix(12);
    } else if (token.ends_with("-gamma")) {
        spec.null_model = NullModel::Gamma;
        token.remove_suffix(6);
    } else {
        spec.null_model = NullModel::Permutation;
    }
    spec.stat = parse_stat_kind(token);
    return spec;
}

void ExperimentGrid::validate() const {
    if (thetas.empty() || ns.empty() || ds.empty() || tests.empty())
        throw InvalidInputError("experiment grid: empty axis");
    for (double t : thetas)
        if (!(t >= 0.0 && t <= std::numbers::pi_v<double> / 4.0 + 1e-3))
            throw InvalidInputError("experiment grid: theta outside [0, pi/4]");
    for (int n : ns)
        if (n < 2)
            throw InvalidInputError("experiment grid: n must be >= 2");
    for (int d : ds)
        if (d != 1 && d != 2 && d != 4)
            throw InvalidInputError("experiment grid: d must be one of {1, 2, 4}");
    if (repetitions < 1)
        throw InvalidInputError("experiment grid: repetitions must be >= 1");
    if (permutations < 1)
        throw InvalidInputError("experiment grid: permutations must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidInputError("experiment grid: alpha must lie in (0, 1)");
    if (workers < 1)
        throw InvalidInputError("experiment grid: workers must be >= 1");
}

CellRunError::CellRunError(int repetition, const std::string& what)
    : Error(what), repetition_(repetition) {}

GridError::GridError(std::vector<CellFailure> failures, PowerReport partial)
    : Error([&failures] {
          std::string msg = std::to_string(failures.size()) + " grid cell(s) failed:";
          for (const CellFailure& f : failures)
              msg += "\n  [test=" + f.test + " theta=" + fmt_g17(f.theta) + " n=" +
                     std::to_string(f.n) + " d=" + std::to_string(f.d) + " rep=" +
                     std::to_string(f.repetition) + "] " + f.message;
          return msg;
      }()),
      failures_(std::move(failures)),
      partial_(std::move(partial)) {}

PowerCell run_cell(const ExperimentGrid& grid, int theta_idx, int n_idx, int d_idx,
                   int test_idx) {
    const int reps = grid.repetitions;
    std::vector<std::uint8_t> accepts(static_cast<std::size_t>(reps), 0);

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    int failed_rep = reps;
    std::string failure_message;

    const auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= reps)
                return;
            try {
                accepts[static_cast<std::size_t>(i)] =
                    repetition_accepts(grid, theta_idx, n_idx, d_idx, test_idx, i) ? 1 : 0;
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (i < failed_rep) {
                    failed_rep = i;
                    failure_message = e.what();
                }
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    const int workers = std::min(grid.workers, reps);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    if (failed.load())
        throw CellRunError(failed_rep, "repetition " + std::to_string(failed_rep) +
                                           " failed: " + failure_message);

    PowerCell cell;
    cell.test = test_spec_name(grid.tests[static_cast<std::size_t>(test_idx)]);
    cell.theta = grid.thetas[static_cast<std::size_t>(theta_idx)];
    cell.n = grid.ns[static_cast<std::size_t>(n_idx)];
    cell.d = grid.ds[static_cast<std::size_t>(d_idx)];
    cell.repetitions = reps;
    for (std::uint8_t a : accepts)
        cell.accept_count += a;
    cell.accept_rate = static_cast<double>(cell.accept_count) / static_cast<double>(reps);
    cell.seed = stream_key(grid.base_seed, "cell-" + cell.test + "-t" + std::to_string(theta_idx) +
                                               "-n" + std::to_string(n_idx) + "-d" +
                                               std::to_string(d_idx));
    return cell;
}

PowerReport run_grid(const ExperimentGrid& grid, const ProgressFn& progress) {
    grid.validate();
    const auto start = std::chrono::steady_clock::now();

    PowerReport report;
    report.grid = grid;
    std::vector<CellFailure> failures;

    const int total = static_cast<int>(grid.thetas.size() * grid.ns.size() * grid.ds.size() *
                                       grid.tests.size());
    int done = 0;
    for (std::size_t ti = 0; ti < grid.thetas.size(); ++ti) {
        for (std::size_t ni = 0; ni < grid.ns.size(); ++ni) {
            for (std::size_t di = 0; di < grid.ds.size(); ++di) {
                for (std::size_t si = 0; si < grid.tests.size(); ++si) {
                    try {
                        report.cells.push_back(run_cell(grid, static_cast<int>(ti),
                                                        static_cast<int>(ni), static_cast<int>(di),
                                                        static_cast<int>(si)));
                    } catch (const CellRunError& e) {
                        failures.push_back(CellFailure{
                            test_spec_name(grid.tests[si]), grid.thetas[ti], grid.ns[ni],
                            grid.ds[di], e.repetition(), e.what()});
                    }
                    ++done;
                    if (progress)
                        progress(done, total);
                }
            }
        }
    }

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!failures.empty())
        throw GridError(std::move(failures), std::move(report));
    return report;
}

std::string emit_report_csv(const PowerReport& report) {
    std::string out = "test,theta,n,d,repetitions,accept_count,accept_rate,seed\n";
    for (const PowerCell& c : report.cells) {
        out += c.test;
        out += ',';
        out += fmt_g17(c.theta);
        out += ',';
        out += std::to_string(c.n);
        out += ',';
        out += std::to_string(c.d);
        out += ',';
        out += std::to_string(c.repetitions);
        out += ',';
        out += std::to_string(c.accept_count);
        out += ',';
        out += fmt_f6(c.accept_rate);
        out += ',';
        out += std::to_string(c.seed);
        out += '\n';
    }
    return out;
}

PowerReport parse_report_csv(const std::string& text) {
    std::vector<std::string> lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty())
        lines.pop_back();
    if (lines.empty())
        throw ParseError("empty report", 1);
    if (lines[0] != "test,theta,n,d,repetitions,accept_count,accept_rate,seed")
        throw ParseError("unexpected report header", 1);

    PowerReport report;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const long line_no = static_cast<long>(r) + 1;
        const std::vector<std::string> f = split(lines[r], ',');
        if (f.size() != 8)
            throw ParseError("expected 8 fields", line_no);
        PowerCell cell;
        try {
            parse_test_spec(f[0]);  // validates the id
        } catch (const Error&) {
            throw ParseError("unknown test id '" + f[0] + "'", line_no);
        }
        cell.test = f[0];
        long n = 0, d = 0, reps = 0, count = 0;
        unsigned long long seed = 0;
        if (!parse_double(f[1], cell.theta) || !parse_long(f[2], n) || !parse_long(f[3], d) ||
            !parse_long(f[4], reps) || !parse_long(f[5], count) ||
            !parse_double(f[6], cell.accept_rate) || !parse_u64(f[7], seed))
            throw ParseError("bad field value", line_no);
        cell.n = static_cast<int>(n);
        cell.d = static_cast<int>(d);
        cell.repetitions = static_cast<int>(reps);
        cell.accept_count = static_cast<int>(count);
        cell.seed = seed;
        report.cells.push_back(std::move(cell));
    }
    return report;
}

namespace {

void append_json_cell(std::string& out, const PowerCell& c) {
    out += "    {\"test\":\"" + c.test + "\",\"theta\":" + fmt_g17(c.theta) +
           ",\"n\":" + std::to_string(c.n) + ",\"d\":" + std::to_string(c.d) +
           ",\"repetitions\":" + std::to_string(c.repetitions) +
           ",\"accept_count\":" + std::to_string(c.accept_count) +
           ",\"accept_rate\":" + fmt_g17(c.accept_rate) + ",\"seed\":" + std::to_string(c.seed) +
           "}";
}

}  // namespace

std::string emit_report_json(const PowerReport& report) {
    const ExperimentGrid& g = report.grid;
    std::string out = "{\n  \"grid\": {\n    \"thetas\": [";
    for (std::size_t i = 0; i < g.thetas.size(); ++i)
        out += (i ? "," : "") + fmt_g17(g.thetas[i]);
    out += "],\n    \"ns\": [";
    for (std::size_t i = 0; i < g.ns.size(); ++i)
        out += (i ? "," : "") + std::to_string(g.ns[i]);
    out += "],\n    \"ds\": [";
    for (std::size_t i = 0; i < g.ds.size(); ++i)
        out += (i ? "," : "") + std::to_string(g.ds[i]);
    out += "],\n    \"tests\": [";
    for (std::size_t i = 0; i < g.tests.size(); ++i)
        out += std::string(i ? "," : "") + "\"" + test_spec_name(g.tests[i]) + "\"";
    out += "],\n";
    out += "    \"repetitions\": " + std::to_string(g.repetitions) + ",\n";
    out += "    \"permutations\": " + std::to_string(g.permutations) + ",\n";
    out += "    \"alpha\": " + fmt_g17(g.alpha) + ",\n";
    out += "    \"seed\": " + std::to_string(g.base_seed) + ",\n";
    out += "    \"density_x\": \"" + std::string(source_density_name(g.density_x)) + "\",\n";
    out += "    \"density_y\": \"" + std::string(source_density_name(g.density_y)) + "\",\n";
    out += std::string("    \"fresh_density_per_rep\": ") +
           (g.fresh_density_per_rep ? "true" : "false") + "\n  },\n  \"cells\": [\n";
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        append_json_cell(out, report.cells[i]);
        out += (i + 1 < report.cells.size()) ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

namespace {

ExperimentGrid grid_from_json(const nlohmann::json& g) {
    if (!g.is_object())
        throw nlohmann::json::type_error::create(302, "grid config must be a JSON object", &g);
    ExperimentGrid grid;
    if (g.contains("thetas"))
        grid.thetas = g.at("thetas").get<std::vector<double>>();
    if (g.contains("ns"))
        grid.ns = g.at("ns").get<std::vector<int>>();
    if (g.contains("ds"))
        grid.ds = g.at("ds").get<std::vector<int>>();
    if (g.contains("tests")) {
        grid.tests.clear();
        for (const auto& t : g.at("tests"))
            grid.tests.push_back(parse_test_spec(t.get<std::string>()));
    }
    if (g.contains("repetitions"))
        grid.repetitions = g.at("repetitions").get<int>();
    if (g.contains("permutations"))
        grid.permutations = g.at("permutations").get<int>();
    if (g.contains("alpha"))
        grid.alpha = g.at("alpha").get<double>();
    if (g.contains("seed"))
        grid.base_seed = g.at("seed").get<std::uint64_t>();
    if (g.contains("density_x"))
        grid.density_x = parse_source_density(g.at("density_x").get<std::string>());
    if (g.contains("density_y"))
        grid.density_y = parse_source_density(g.at("density_y").get<std::string>());
    if (g.contains("fresh_density_per_rep"))
        grid.fresh_density_per_rep = g.at("fresh_density_per_rep").get<bool>();
    if (g.contains("workers"))
        grid.workers = g.at("workers").get<int>();
    return grid;
}

}  // namespace

ExperimentGrid parse_grid_json(const std::string& text) {
    try {
        return grid_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad grid JSON: ") + e.what(), 1);
    }
}

PowerReport parse_report_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad report JSON: ") + e.what(), 1);
    }
    try {
        PowerReport report;
        report.grid = grid_from_json(j.at("grid"));
        for (const auto& c : j.at("cells")) {
            PowerCell cell;
            cell.test = c.at("test").get<std::string>();
            parse_test_spec(cell.test);
            cell.theta = c.at("theta").get<double>();
            cell.n = c.at("n").get<int>();
            cell.d = c.at("d").get<int>();
            cell.repetitions = c.at("repetitions").get<int>();
            cell.accept_count = c.at("accept_count").get<int>();
            cell.accept_rate = c.at("accept_rate").get<double>();
            cell.seed = c.at("seed").get<std::uint64_t>();
            report.cells.push_back(std::move(cell));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad report JSON: ") + e.what(), 1);
    }
}

}  // namespace depstat

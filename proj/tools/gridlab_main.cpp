// gridlab: parametric sweep runner.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <openssl/evp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>
#include <sstream>
#include <thread>

#include "gridlab/errors.hpp"
#include "gridlab/exports.hpp"
#include "gridlab/kernels.hpp"
#include "gridlab/pipeline.hpp"
#include "gridlab/scenario.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gridlab::IntegrityError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(std::string_view s) { EVP_DigestUpdate(ctx_, s.data(), s.size()); }
    std::string hex() {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, md, &len);
        static const char* digits = "0123456789abcdef";
        std::string out;
        for (unsigned i = 0; i < len; ++i) {
            out += digits[md[i] >> 4];
            out += digits[md[i] & 0xF];
        }
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("gridlab");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("GRIDLAB_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Half-hourly grid planning sweep"};
    std::string config, data_dir, out_dir = "gridlab_out";
    std::optional<std::uint64_t> seed;
    unsigned parallelism = std::max(1u, std::thread::hardware_concurrency());
    std::optional<int> detail_year;
    double re_target_gwh = 0.0;
    bool validate_only = false;
    app.add_option("--config", config, "JSON scenario or grid file (defaults to the base case)")
        ->check(CLI::ExistingFile);
    auto* data = app.add_option("--data", data_dir,
                                "Directory with timeseries.csv and solar_shape.csv")
                     ->check(CLI::ExistingDirectory);
    app.add_option("--synthetic", seed, "Use the synthetic base year with this seed")
        ->excludes(data);
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--year-detail", detail_year,
                   "Write slot-level CSVs for this year (first grid point)")
        ->check(CLI::Range(gridlab::kFirstYear, gridlab::kLastYear));
    app.add_option("--re-target-gwh", re_target_gwh,
                   "Rescale base-year RE to this annual energy (with --data)");
    app.add_flag("--validate-only", validate_only, "Check the config and exit");
    CLI11_PARSE(app, argc, argv);

    configure_logging();
    try {
        const std::string config_text = config.empty() ? "{}" : read_file(config);
        const gridlab::ParamGrid grid = gridlab::load_param_grid(config_text);
        const auto points = gridlab::expand_param_grid(grid);
        for (std::size_t i = 0; i < points.size(); ++i) {
            try {
                points[i].validate();
            } catch (const gridlab::GridError& e) {
                std::cerr << "scenario " << i << " (" << gridlab::scenario_key(grid, i)
                          << "): " << e.what() << '\n';
                return 2;
            }
        }
        if (validate_only) {
            std::cout << "config ok: " << points.size() << " scenarios\n";
            return 0;
        }
        if (!seed && data_dir.empty()) {
            std::cerr << "either --data or --synthetic is required\n";
            return 2;
        }

        const auto t0 = std::chrono::steady_clock::now();
        Sha256 hash;
        hash.update(config_text);
        gridlab::BaseData base;
        if (seed) {
            hash.update("synthetic:" + std::to_string(*seed));
            base = gridlab::synthetic_base(*seed);
        } else {
            const std::filesystem::path dir(data_dir);
            hash.update(read_file(dir / "timeseries.csv"));
            hash.update(read_file(dir / "solar_shape.csv"));
            base = gridlab::load_base(dir, 2021, re_target_gwh);
        }
        spdlog::info("{} scenarios, {} workers, kernels {}", points.size(), parallelism,
                     gridlab::kernels::name(gridlab::kernels::active().isa));

        gridlab::FigureExporter exporter(out_dir, grid);
        gridlab::run_sweep(grid, base, parallelism, detail_year, [&](gridlab::SweepOutcome&& o) {
            if (!o.result) {
                std::cerr << "scenario " << o.index << " (" << gridlab::scenario_key(grid, o.index)
                          << ") failed: " << o.error << '\n';
            } else {
                spdlog::debug("scenario {} done", o.index);
            }
            exporter.add(std::move(o));
        });
        const std::size_t failed = exporter.finish();
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        nlohmann::ordered_json m;
        m["tool_version"] = kVersion;
        m["config"] = config;
        m["data"] = seed ? nlohmann::ordered_json("synthetic:" + std::to_string(*seed))
                         : nlohmann::ordered_json(data_dir);
        m["scenarios"] = points.size();
        m["failed"] = failed;
        m["output_dir"] = out_dir;
        m["input_sha256"] = hash.hex();
        m["wall_time_s"] = wall;
        std::ofstream(std::filesystem::path(out_dir) / "manifest.json") << m.dump(2) << '\n';
        spdlog::info("finished in {:.1f} s", wall);
        return failed == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

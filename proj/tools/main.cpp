#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bcap/capacity.hpp"
#include "bcap/parallel.hpp"
#include "bcap/receivers.hpp"
#include "bcap/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Doubles destined for JSON are rounded to 12 significant digits so csv and
// json carry the same values.
double round12(double v) { return std::stod(fmt12(v)); }

struct Cell {
    std::string text;
    enum class Type { number, string } type;

    static Cell num(double v) { return {fmt12(v), Type::number}; }
    static Cell str(std::string s) { return {std::move(s), Type::string}; }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

void emit(const Table& table, const std::string& quantity, const nlohmann::json& params,
          const std::string& format, const std::string& output_path) {
    std::string text;
    if (format == "csv") {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            text += (c ? "," : "") + table.columns[c];
        text += "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + row[c].text;
            text += "\n";
        }
    } else {
        nlohmann::json j;
        j["quantity"] = quantity;
        j["params"] = params;
        j["rows"] = nlohmann::json::array();
        for (const auto& row : table.rows) {
            nlohmann::json obj;
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (row[c].type == Cell::Type::number)
                    obj[table.columns[c]] = std::stod(row[c].text);
                else
                    obj[table.columns[c]] = row[c].text;
            }
            j["rows"].push_back(std::move(obj));
        }
        text = j.dump(2);
        text += "\n";
    }
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + output_path);
        out << text;
    }
}

std::vector<double> make_grid(double lo, double hi, int points, bool log_spacing) {
    std::vector<double> grid(points);
    if (log_spacing) {
        const double llo = std::log(lo), lhi = std::log(hi);
        for (int i = 0; i < points; ++i)
            grid[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
    } else {
        for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
    }
    return grid;
}

struct SweepOptions {
    std::string quantity;
    double nbar_min = 0.01;
    double nbar_max = 10.0;
    int points = 50;
    bool log_spacing = false;
    std::optional<double> eta;
    std::optional<double> input_thermal;
    std::optional<double> nth_flag;
    int psk_order = 2;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string output;
    std::string preset;
};

void fill_parallel(Table& table, std::size_t count,
                   const std::function<std::vector<Cell>(std::size_t)>& make_row) {
    table.rows.resize(count);
    bcap::parallel_for(count, [&](std::size_t i) { table.rows[i] = make_row(i); });
}

int run_sweep(const SweepOptions& opt) {
    // Resolve the received noise photon number.
    double nth = 0.0;
    if (opt.eta || opt.input_thermal) {
        if (opt.nth_flag) {
            std::cerr << "give either --nth or --eta/--input-thermal, not both\n";
            return kExitUsage;
        }
        if (!opt.eta || !opt.input_thermal) {
            std::cerr << "--eta and --input-thermal must be given together\n";
            return kExitUsage;
        }
        if (!(*opt.eta > 0.0 && *opt.eta <= 1.0) || *opt.input_thermal < 0.0) {
            std::cerr << "invalid channel parameters\n";
            return kExitDomain;
        }
        nth = (1.0 - *opt.eta) * *opt.input_thermal;
    } else if (opt.nth_flag) {
        nth = *opt.nth_flag;
    }

    const bool uses_nth = opt.quantity == "gaussian" || opt.quantity == "holevo" ||
                          opt.quantity == "hom" || opt.quantity == "het" ||
                          opt.quantity == "fixed";
    if (!uses_nth && nth != 0.0 && opt.preset.empty()) {
        std::cerr << "quantity '" << opt.quantity << "' models the pure-loss channel; --nth"
                  << " is not supported here\n";
        return kExitUsage;
    }
    if (opt.points < 2) {
        std::cerr << "--points must be at least 2\n";
        return kExitUsage;
    }
    if (opt.log_spacing && !(opt.nbar_min > 0.0)) {
        std::cerr << "log spacing needs --nbar-min > 0\n";
        return kExitUsage;
    }
    if (opt.nbar_min < 0.0 || nth < 0.0) {
        std::cerr << "photon numbers must be >= 0\n";
        return kExitDomain;
    }
    if (!(opt.nbar_max >= opt.nbar_min)) {
        std::cerr << "--nbar-max must be >= --nbar-min\n";
        return kExitUsage;
    }

    nlohmann::json params{{"nbar_min", round12(opt.nbar_min)},
                          {"nbar_max", round12(opt.nbar_max)},
                          {"points", opt.points},
                          {"spacing", opt.log_spacing ? "log" : "linear"},
                          {"nth", round12(nth)},
                          {"seed", opt.seed}};

    Table table;
    const auto grid = make_grid(opt.nbar_min, opt.nbar_max, opt.points, opt.log_spacing);

    if (opt.quantity == "gaussian" || opt.quantity == "fixed") {
        table.columns = {"nbar", "nth", "capacity_bits", "regime"};
        fill_parallel(table, grid.size(), [&](std::size_t i) -> std::vector<Cell> {
            if (opt.quantity == "gaussian") {
                const auto r = bcap::gaussian_capacity(grid[i], nth);
                return {Cell::num(grid[i]), Cell::num(nth), Cell::num(r.capacity_bits),
                        Cell::str(bcap::regime_name(r.regime))};
            }
            const auto r = bcap::fixed_measurement_capacity(grid[i], nth);
            return {Cell::num(grid[i]), Cell::num(nth), Cell::num(r.bits),
                    Cell::str(bcap::regime_name(r.regime))};
        });
    } else if (opt.quantity == "holevo" || opt.quantity == "hom" || opt.quantity == "het") {
        table.columns = {"nbar", "nth", "capacity_bits"};
        fill_parallel(table, grid.size(), [&](std::size_t i) -> std::vector<Cell> {
            double v = 0.0;
            if (opt.quantity == "holevo") v = bcap::holevo_received(grid[i], nth);
            if (opt.quantity == "hom") v = bcap::homodyne_rate(grid[i], nth);
            if (opt.quantity == "het") v = bcap::heterodyne_rate(grid[i], nth);
            return {Cell::num(grid[i]), Cell::num(nth), Cell::num(v)};
        });
    } else if (opt.quantity == "ook-spd" || opt.quantity == "ppm-spd" ||
               opt.quantity == "bpsk-dolinar") {
        table.columns = {"nbar", "capacity_bits"};
        fill_parallel(table, grid.size(), [&](std::size_t i) -> std::vector<Cell> {
            double v = 0.0;
            if (opt.quantity == "ook-spd") v = bcap::ook_spd_capacity(grid[i]);
            if (opt.quantity == "ppm-spd") v = bcap::ppm_spd_capacity(grid[i]);
            if (opt.quantity == "bpsk-dolinar") v = bcap::bpsk_dolinar_capacity(grid[i]);
            return {Cell::num(grid[i]), Cell::num(v)};
        });
    } else if (opt.quantity == "mpsk-holevo") {
        if (opt.psk_order < 2) {
            std::cerr << "--M must be at least 2\n";
            return kExitUsage;
        }
        params["M"] = opt.psk_order;
        table.columns = {"nbar", "M", "capacity_bits"};
        fill_parallel(table, grid.size(), [&](std::size_t i) -> std::vector<Cell> {
            return {Cell::num(grid[i]), Cell::num(opt.psk_order),
                    Cell::num(bcap::mpsk_holevo(opt.psk_order, grid[i]))};
        });
    } else if (opt.quantity == "pie-se") {
        if (!(opt.nbar_min > 0.0)) {
            std::cerr << "pie-se needs --nbar-min > 0\n";
            return kExitUsage;
        }
        table.columns = {"series", "nbar", "se_bits", "pie_bits_per_photon"};
        const auto curves = bcap::pie_se_curves(grid);
        for (const auto& series : curves)
            for (const auto& pt : series.points)
                table.rows.push_back({Cell::str(series.label), Cell::num(pt.nbar),
                                      Cell::num(pt.se_bits), Cell::num(pt.pie_bits_per_photon)});
    } else {
        std::cerr << "unknown quantity '" << opt.quantity << "'\n";
        return kExitUsage;
    }

    emit(table, opt.quantity, params, opt.format, opt.output);
    return kExitOk;
}

int run_preset(const SweepOptions& opt) {
    Table table;
    nlohmann::json params{{"preset", opt.preset}};
    std::string quantity = opt.preset;

    if (opt.preset == "fig4" || opt.preset == "fig5") {
        const auto grid = make_grid(0.0, 6.0, 121, false);
        table.columns = {"series", "nbar", "nth", "capacity_bits"};
        if (opt.preset == "fig4") {
            struct Entry {
                const char* label;
                double (*rate)(double);
            };
            const Entry entries[] = {
                {"gaussian", [](double n) { return bcap::gaussian_capacity(n, 0.0).capacity_bits; }},
                {"hom", [](double n) { return bcap::homodyne_rate(n, 0.0); }},
                {"het", [](double n) { return bcap::heterodyne_rate(n, 0.0); }},
            };
            for (const auto& entry : entries)
                for (double nbar : grid)
                    table.rows.push_back({Cell::str(entry.label), Cell::num(nbar), Cell::num(0.0),
                                          Cell::num(entry.rate(nbar))});
        } else {
            for (int nth = 0; nth <= 5; ++nth)
                for (double nbar : grid)
                    table.rows.push_back(
                        {Cell::str("nth=" + std::to_string(nth)), Cell::num(nbar),
                         Cell::num(nth),
                         Cell::num(bcap::gaussian_capacity(nbar, nth).capacity_bits)});
        }
    } else if (opt.preset == "fig6") {
        const auto grid = make_grid(1e-3, 100.0, 49, true);
        table.columns = {"series", "nbar", "se_bits", "pie_bits_per_photon"};
        for (const auto& series : bcap::pie_se_curves(grid))
            for (const auto& pt : series.points)
                table.rows.push_back({Cell::str(series.label), Cell::num(pt.nbar),
                                      Cell::num(pt.se_bits), Cell::num(pt.pie_bits_per_photon)});
    } else {
        std::cerr << "unknown preset '" << opt.preset << "'\n";
        return kExitUsage;
    }
    emit(table, quantity, params, opt.format, opt.output);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capacities of lossy bosonic channels with coherent-state modulation"};
    app.require_subcommand(1);

    // capacity
    auto* cap = app.add_subcommand("capacity", "Gaussian-receiver capacity at one point");
    double cap_nbar = 0.0;
    double cap_nth = 0.0;
    std::optional<double> cap_eta, cap_input_thermal;
    cap->add_option("--nbar", cap_nbar, "mean received signal photons per mode")->required();
    cap->add_option("--nth", cap_nth, "mean received noise photons per mode");
    cap->add_option("--eta", cap_eta, "channel transmissivity (with --input-thermal)");
    cap->add_option("--input-thermal", cap_input_thermal, "environment thermal photons");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Emit a capacity curve as csv or json");
    SweepOptions opt;
    sweep->add_option("--quantity", opt.quantity, "one of: gaussian holevo hom het fixed ook-spd ppm-spd bpsk-dolinar mpsk-holevo pie-se");
    sweep->add_option("--nbar-min", opt.nbar_min, "grid start");
    sweep->add_option("--nbar-max", opt.nbar_max, "grid end");
    sweep->add_option("--points", opt.points, "grid size (>= 2)");
    sweep->add_flag("--log,!--linear", opt.log_spacing, "log-spaced grid");
    double nth_value = 0.0;
    auto* nth_opt = sweep->add_option("--nth", nth_value, "mean received noise photons per mode");
    sweep->add_option("--eta", opt.eta, "channel transmissivity (with --input-thermal)");
    sweep->add_option("--input-thermal", opt.input_thermal, "environment thermal photons");
    sweep->add_option("--M", opt.psk_order, "PSK constellation size (mpsk-holevo)");
    sweep->add_option("--seed", opt.seed, "seed recorded with the output");
    sweep->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--output", opt.output, "write to file instead of stdout");
    sweep->add_option("--preset", opt.preset, "fig4, fig5 or fig6 figure data recipe")
        ->check(CLI::IsMember({"fig4", "fig5", "fig6"}));

    // verify
    auto* verify = app.add_subcommand("verify", "Run a numerical verification suite");
    std::string suite;
    std::optional<std::uint64_t> verify_seed;
    verify->add_option("suite", suite, "gaussian-core, identity-optimal, feedforward, oracles or all")
        ->required();
    verify->add_option("--seed", verify_seed, "RNG seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cap->parsed()) {
            double nth = cap_nth;
            if (cap_eta || cap_input_thermal) {
                if (!cap_eta || !cap_input_thermal) {
                    std::cerr << "--eta and --input-thermal must be given together\n";
                    return kExitUsage;
                }
                nth = (1.0 - *cap_eta) * *cap_input_thermal;
            }
            const auto r = bcap::gaussian_capacity(cap_nbar, nth);
            nlohmann::json j{{"nbar", round12(r.nbar)},
                             {"nth", round12(r.nth)},
                             {"capacity_bits", round12(r.capacity_bits)},
                             {"regime", bcap::regime_name(r.regime)}};
            std::cout << j.dump() << "\n";
            return kExitOk;
        }
        if (sweep->parsed()) {
            if (nth_opt->count() > 0) opt.nth_flag = nth_value;
            if (!opt.preset.empty() && !opt.quantity.empty()) {
                std::cerr << "give either --preset or --quantity, not both\n";
                return kExitUsage;
            }
            if (!opt.preset.empty()) return run_preset(opt);
            if (opt.quantity.empty()) {
                std::cerr << "--quantity (or --preset) is required\n";
                return kExitUsage;
            }
            return run_sweep(opt);
        }
        if (verify->parsed()) {
            if (!bcap::is_verify_suite(suite)) {
                std::cerr << "unknown suite '" << suite << "'\n";
                return kExitUsage;
            }
            std::uint64_t seed = 0;
            if (verify_seed) {
                seed = *verify_seed;
            } else {
                std::cerr << "no --seed given; defaulting to seed 0\n";
            }
            const auto report = bcap::run_verify_suite(suite, seed);
            std::cout << report.to_json() << "\n";
            return report.pass() ? kExitOk : kExitDomain;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}

// Copyright 2026 The symmqvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "symmqvar/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "symmqvar/datasets.hpp"
#include "symmqvar/model.hpp"
#include "symmqvar/symmetry.hpp"
#include "symmqvar/train.hpp"
#include "symmqvar/vqe.hpp"

namespace symmqvar {

namespace fs = std::filesystem;

namespace {

std::ostream &log_of(const RunOptions &o) { return o.log ? *o.log : std::cout; }

/// Typed access to one config object; unknown keys are rejected by done().
class Fields {
   public:
    Fields(const json &j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) {
            throw ConfigError(where_ + ": expected an object");
        }
    }

    bool has(const std::string &key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json &raw(const std::string &key) {
        if (!has(key)) {
            throw ConfigError(where_ + ": missing field '" + key + "'");
        }
        return j_.at(key);
    }

    std::string str(const std::string &key, std::optional<std::string> fallback = std::nullopt) {
        if (!has(key)) {
            return fallback ? *fallback : missing<std::string>(key);
        }
        const auto &v = j_.at(key);
        if (!v.is_string()) {
            fail(key, "a string");
        }
        return v.get<std::string>();
    }

    double num(const std::string &key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) {
            return fallback ? *fallback : missing<double>(key);
        }
        const auto &v = j_.at(key);
        if (!v.is_number()) {
            fail(key, "a number");
        }
        return v.get<double>();
    }

    std::uint64_t count(const std::string &key, std::optional<std::uint64_t> fallback = std::nullopt) {
        if (!has(key)) {
            return fallback ? *fallback : missing<std::uint64_t>(key);
        }
        return as_count(j_.at(key), key);
    }

    bool flag(const std::string &key, bool fallback) {
        if (!has(key)) {
            return fallback;
        }
        const auto &v = j_.at(key);
        if (!v.is_boolean()) {
            fail(key, "a boolean");
        }
        return v.get<bool>();
    }

    std::vector<std::uint64_t> counts(const std::string &key, std::optional<std::vector<std::uint64_t>> fallback) {
        if (!has(key)) {
            return fallback ? *fallback : missing<std::vector<std::uint64_t>>(key);
        }
        const auto &v = j_.at(key);
        if (!v.is_array() || v.empty()) {
            fail(key, "a non-empty list of non-negative integers");
        }
        std::vector<std::uint64_t> out;
        for (const auto &e : v) {
            out.push_back(as_count(e, key));
        }
        return out;
    }

    std::vector<std::string> strs(const std::string &key, std::optional<std::vector<std::string>> fallback) {
        if (!has(key)) {
            return fallback ? *fallback : missing<std::vector<std::string>>(key);
        }
        const auto &v = j_.at(key);
        if (!v.is_array() || v.empty()) {
            fail(key, "a non-empty list of strings");
        }
        std::vector<std::string> out;
        for (const auto &e : v) {
            if (!e.is_string()) {
                fail(key, "a non-empty list of strings");
            }
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    void done() const {
        for (const auto &[key, value] : j_.items()) {
            if (!seen_.count(key)) {
                throw ConfigError(where_ + ": unknown field '" + key + "'");
            }
        }
    }

    [[noreturn]] void fail(const std::string &key, const std::string &what) const {
        throw ConfigError(where_ + ": field '" + key + "' must be " + what);
    }

   private:
    template <class T>
    [[noreturn]] T missing(const std::string &key) const {
        throw ConfigError(where_ + ": missing field '" + key + "'");
    }

    std::uint64_t as_count(const json &v, const std::string &key) const {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail(key, "a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    const json &j_;
    std::string where_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

/// Runs f(i) for i in [0, count) on `threads` workers. The exception of the
/// smallest failing index is rethrown after all workers finish; results of
/// other indices are kept by the caller.
template <class F>
std::vector<std::exception_ptr> parallel_for(std::size_t count, std::size_t threads, F f) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t k = std::max<std::size_t>(1, std::min(threads, count));
    if (k == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < k; t++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return errors;
}

void rethrow_first(const std::vector<std::exception_ptr> &errors) {
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

json base_manifest(const std::string &command, const json &config, const json &effective, const RunOptions &o) {
    fs::create_directories(o.out_dir);
    return {{"command", command}, {"config", config}, {"effective_config", effective}, {"smoke", o.smoke}};
}

// ---------------------------------------------------------------- twirl

std::vector<PauliSum> standard_gateset(std::size_t n) {
    std::vector<PauliSum> out;
    for (std::size_t q = 0; q < n; q++) {
        for (char c : {'X', 'Y', 'Z'}) {
            out.push_back(PauliSum::from_pauli(PauliString::single(n, q, c)));
        }
    }
    for (std::size_t q = 0; q + 1 < n; q++) {
        std::string w(n, 'I');
        w[q] = w[q + 1] = 'Z';
        out.push_back(PauliSum::from_pauli(PauliString(w)));
    }
    return out;
}

}  // namespace

std::size_t resolve_threads(std::optional<std::size_t> flag) {
    if (flag) {
        if (*flag == 0) {
            throw ConfigError("--threads must be at least 1");
        }
        return *flag;
    }
    if (const char *env = std::getenv("SYMMQVAR_THREADS"); env && *env) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v <= 0) {
            throw ConfigError(std::string("SYMMQVAR_THREADS must be a positive integer, got '") + env + "'");
        }
        return static_cast<std::size_t>(v);
    }
    return 1;
}

json effective_config(const json &config, bool smoke) {
    if (!config.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }
    json out = config;
    if (out.contains("smoke")) {
        const json patch = out.at("smoke");
        if (!patch.is_object()) {
            throw ConfigError("config: field 'smoke' must be an object");
        }
        out.erase("smoke");
        if (smoke) {
            out.merge_patch(patch);
        }
    }
    return out;
}

json cmd_twirl(const json &config, const RunOptions &options) {
    const json eff = effective_config(config, options.smoke);
    Fields f(eff, "twirl");
    const std::string rep_name = f.str("rep");
    const std::size_t n_field = f.count("num_qubits", 0);
    const json &gateset_json = f.raw("gateset");
    f.done();

    const bool haar = rep_name == "haar_local";
    SymmetryRep rep;
    std::size_t n = n_field;
    if (!haar) {
        try {
            rep = make_rep(rep_name, n_field);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("twirl: ") + e.what());
        }
        require(n_field == 0 || n_field == rep.num_qubits, "twirl: num_qubits does not match the representation");
        n = rep.num_qubits;
    }
    require(n > 0, "twirl: num_qubits is required for this representation");

    std::vector<PauliSum> gateset;
    if (gateset_json.is_string() && gateset_json.get<std::string>() == "standard") {
        gateset = standard_gateset(n);
    } else {
        require(gateset_json.is_array(), "twirl: gateset must be \"standard\" or a list of operators");
        for (const auto &g : gateset_json) {
            try {
                gateset.push_back(pauli_sum_from_json(g, n));
            } catch (const std::exception &e) {
                throw ConfigError(std::string("twirl: bad gateset entry: ") + e.what());
            }
            require(gateset.back().num_qubits() == n, "twirl: gateset entry has the wrong qubit count");
        }
    }

    GatesetReport report;
    try {
        report = haar ? symmetrize_gateset(gateset, HaarTwirlSpec{n}) : symmetrize_gateset(gateset, rep);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("twirl: ") + e.what());
    }

    auto &log = log_of(options);
    log << "equivariant gateset (" << report.generators.size() << " of " << gateset.size() << " generators)\n";
    for (const auto &g : report.generators) {
        log << "  " << g.str() << "\n";
    }
    for (const auto &note : report.notes) {
        log << (report.generators.empty() ? "warning: " : "note: ") << note << "\n";
    }

    json manifest = base_manifest("twirl", config, eff, options);
    json inputs = json::array();
    for (const auto &g : gateset) {
        inputs.push_back(g.str());
    }
    manifest["input_gateset"] = inputs;
    manifest["representation"] = haar ? json{{"name", "haar_local"}, {"n", n}} : to_json(rep);
    manifest["result"] = to_json(report);
    write_json_file(options.out_dir / "gateset.json", manifest["result"]);
    write_json_file(options.out_dir / "manifest.json", manifest);
    return manifest;
}

namespace {

// ---------------------------------------------------------------- train

struct TrainCell {
    std::string run_id;
    std::string variant;
    std::size_t l = 1, p = 1;
    std::string layout_name;
    std::string layout;
    std::uint64_t seed = 0;
    std::uint64_t split_seed = 0;
};

struct TrainOutcome {
    std::size_t param_count = 0;
    MetricsSeries series;
    std::string error;
    std::size_t error_step = 0;
};

/// (l, p) in {1..5}^2; the five deepest cells are opt-in because of their cost.
std::vector<std::pair<std::size_t, std::size_t>> sweep_grid(bool include_excluded) {
    const std::set<std::pair<std::size_t, std::size_t>> excluded = {{4, 4}, {4, 5}, {5, 3}, {5, 4}, {5, 5}};
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t l = 1; l <= 5; l++) {
        for (std::size_t p = 1; p <= 5; p++) {
            if (include_excluded || !excluded.count({l, p})) {
                out.emplace_back(l, p);
            }
        }
    }
    return out;
}

std::string resolve_layout(const std::string &name) {
    const std::string prefix = "random:";
    if (name.rfind(prefix, 0) == 0) {
        const std::string digits = name.substr(prefix.size());
        require(!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos,
                "train: random layout must look like random:<seed>");
        return random_layout(std::stoull(digits));
    }
    return name;
}

}  // namespace

json cmd_train(const json &config, const RunOptions &options) {
    const json eff = effective_config(config, options.smoke);
    Fields f(eff, "train");
    const std::string task = f.str("task");
    require(task == "ttt" || task == "driving", "train: task must be \"ttt\" or \"driving\"");
    const bool ttt = task == "ttt";
    const auto variants = f.strs("variants", std::vector<std::string>{"invariant", "free"});
    for (const auto &v : variants) {
        require(v == "invariant" || v == "free", "train: variants must be \"invariant\" or \"free\"");
    }
    std::vector<std::pair<std::size_t, std::size_t>> grid = {{1, 1}};
    const bool include_excluded = f.flag("include_excluded_cells", false);
    if (f.has("grid") && eff.at("grid").is_string()) {
        require(eff.at("grid").get<std::string>() == "full_sweep",
                "train: grid must be \"full_sweep\" or a list of [l, p] pairs");
        grid = sweep_grid(include_excluded);
    } else if (f.has("grid")) {
        grid.clear();
        const json &g = eff.at("grid");
        require(g.is_array() && !g.empty(), "train: grid must be a non-empty list of [l, p] pairs");
        for (const auto &cell : g) {
            require(cell.is_array() && cell.size() == 2 && cell[0].is_number_unsigned() && cell[1].is_number_unsigned(),
                    "train: grid entries must be [l, p] with positive integers");
            grid.emplace_back(cell[0].get<std::size_t>(), cell[1].get<std::size_t>());
            require(grid.back().first > 0 && grid.back().second > 0, "train: l and p must be positive");
        }
    }
    const auto layouts = f.strs("layouts", std::vector<std::string>{"tcemoid"});
    const auto seeds = f.counts("seeds", std::vector<std::uint64_t>{0});
    const std::string entangler = f.str("entangler", std::string(ttt ? "Y" : "Z"));
    require(entangler.size() == 1 && std::string("XYZ").find(entangler[0]) != std::string::npos,
            "train: entangler must be X, Y or Z");
    require(ttt || entangler == "Z", "train: driving models use the Z entangler");

    TrainConfig tc = ttt ? TrainConfig::ttt_protocol(0) : TrainConfig::driving_protocol(0);
    tc.epochs = f.count(ttt ? "epochs" : "steps", tc.epochs);
    if (ttt) {
        tc.steps_per_epoch = f.count("steps_per_epoch", tc.steps_per_epoch);
        tc.batch_size = f.count("batch_size", tc.batch_size);
        tc.learning_rate = f.num("learning_rate", tc.learning_rate);
    }
    tc.gradient_checks = f.count("gradient_checks", 0);
    const std::size_t train_size = f.count("train_size", ttt ? 450 : 60);
    const std::size_t test_size = f.count("test_size", ttt ? 600 : 130);
    const bool allow_duplicates = f.flag("allow_duplicates", !ttt);
    const bool fixed_split = f.has("split_seed");
    const std::uint64_t split_seed = fixed_split ? f.count("split_seed") : 0;
    f.done();
    try {
        tc.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }

    // Expand and validate every cell before any training starts.
    std::vector<TrainCell> cells;
    for (auto [l, p] : grid) {
        for (const auto &layout_name : layouts) {
            const std::string layout = resolve_layout(layout_name);
            try {
                validate_layout(layout);
            } catch (const std::invalid_argument &e) {
                throw ConfigError(std::string("train: ") + e.what());
            }
            for (const auto &variant : variants) {
                for (std::uint64_t seed : seeds) {
                    TrainCell c;
                    c.variant = variant;
                    c.l = l;
                    c.p = p;
                    c.layout_name = layout_name;
                    c.layout = layout;
                    c.seed = seed;
                    c.split_seed = fixed_split ? split_seed : seed;
                    c.run_id = task + "_l" + std::to_string(l) + "_p" + std::to_string(p) + "_" + layout + "_" +
                               variant + "_s" + std::to_string(seed);
                    cells.push_back(c);
                }
            }
        }
    }
    const std::size_t num_classes = ttt ? 3 : kDifficulties.size();
    const auto classes = ttt ? ttt_classes(enumerate_ttt()) : driving_classes(enumerate_driving());
    try {
        balanced_split(classes, num_classes, {train_size, test_size, 0, allow_duplicates});
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("train: ") + e.what());
    }

    json manifest = base_manifest("train", config, eff, options);
    fs::create_directories(options.out_dir / "metrics");
    std::vector<TrainOutcome> outcomes(cells.size());
    std::mutex log_mutex;
    const auto errors = parallel_for(cells.size(), options.threads, [&](std::size_t i) {
        const TrainCell &c = cells[i];
        const ReuploadModel model =
            ttt ? build_ttt_model(c.l, c.p, c.layout, c.variant == "invariant", entangler[0])
                : build_driving_model(c.l, c.p, c.layout, c.variant == "invariant");
        const Split split = balanced_split(classes, num_classes, {train_size, test_size, c.split_seed, allow_duplicates});
        const auto train_set = ttt ? ttt_samples(split.train) : driving_samples(split.train);
        const auto test_set = ttt ? ttt_samples(split.test) : driving_samples(split.test);
        TrainConfig run_cfg = tc;
        run_cfg.seed = c.seed;
        outcomes[i].param_count = model.param_count();
        try {
            outcomes[i].series = train(model, train_set, test_set, run_cfg);
        } catch (const DivergenceError &e) {
            outcomes[i].error = e.what();
            outcomes[i].error_step = e.step();
            throw;
        }
        std::lock_guard lock(log_mutex);
        const auto &last = outcomes[i].series.rows.back();
        log_of(options) << c.run_id << ": params " << model.param_count() << ", train acc " << last.train_acc
                        << ", test acc " << last.test_acc << std::endl;
    });

    // Collector: rows are written in cell order regardless of thread count.
    const std::string index_col = ttt ? "epoch" : "step";
    CsvWriter finals(options.out_dir / "final.csv",
                     {"run_id", "variant", "l", "p", "layout", "seed", "param_count", "train_loss", "train_acc",
                      "test_loss", "test_acc"});
    json runs = json::array();
    for (std::size_t i = 0; i < cells.size(); i++) {
        const TrainCell &c = cells[i];
        const TrainOutcome &o = outcomes[i];
        json run = {{"run_id", c.run_id}, {"variant", c.variant}, {"l", c.l},          {"p", c.p},
                    {"layout", c.layout}, {"seed", c.seed},       {"split_seed", c.split_seed},
                    {"param_count", o.param_count}};
        if (!o.error.empty() || errors[i]) {
            run["error"] = o.error.empty() ? "failed" : o.error;
            run["error_step"] = o.error_step;
            runs.push_back(run);
            continue;
        }
        CsvWriter m(options.out_dir / "metrics" / (c.run_id + ".csv"),
                    {"run_id", "seed", index_col, "train_loss", "train_acc", "test_loss", "test_acc"});
        for (const auto &r : o.series.rows) {
            m.row({c.run_id, std::to_string(c.seed), std::to_string(r.index), format_double(r.train_loss),
                   format_double(r.train_acc), format_double(r.test_loss), format_double(r.test_acc)});
        }
        const auto &last = o.series.rows.back();
        finals.row({c.run_id, c.variant, std::to_string(c.l), std::to_string(c.p), c.layout, std::to_string(c.seed),
                    std::to_string(o.param_count), format_double(last.train_loss), format_double(last.train_acc),
                    format_double(last.test_loss), format_double(last.test_acc)});
        run["final_params"] = o.series.final_params;
        run["gradient_check_errors"] = o.series.gradient_check_errors;
        runs.push_back(run);
    }
    finals.flush();

    // Invariant minus free mean accuracies per (l, p, layout).
    CsvWriter deltas(options.out_dir / "deltas.csv",
                     {"l", "p", "layout", "invariant_test_acc", "free_test_acc", "delta_test_acc",
                      "invariant_train_acc", "free_train_acc", "delta_train_acc"});
    std::map<std::tuple<std::size_t, std::size_t, std::string>, std::map<std::string, std::array<double, 3>>> agg;
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> order;
    for (std::size_t i = 0; i < cells.size(); i++) {
        if (errors[i]) {
            continue;
        }
        const auto key = std::make_tuple(cells[i].l, cells[i].p, cells[i].layout);
        if (!agg.count(key)) {
            order.push_back(key);
        }
        auto &acc = agg[key][cells[i].variant];
        const auto &last = outcomes[i].series.rows.back();
        acc[0] += last.test_acc;
        acc[1] += last.train_acc;
        acc[2] += 1;
    }
    json delta_json = json::array();
    for (const auto &key : order) {
        const auto &by = agg[key];
        if (!by.count("invariant") || !by.count("free")) {
            continue;
        }
        const auto &a = by.at("invariant");
        const auto &b = by.at("free");
        const double it = a[0] / a[2], ft = b[0] / b[2], ir = a[1] / a[2], fr = b[1] / b[2];
        deltas.row({std::to_string(std::get<0>(key)), std::to_string(std::get<1>(key)), std::get<2>(key),
                    format_double(it), format_double(ft), format_double(it - ft), format_double(ir),
                    format_double(fr), format_double(ir - fr)});
        delta_json.push_back({{"l", std::get<0>(key)},
                              {"p", std::get<1>(key)},
                              {"layout", std::get<2>(key)},
                              {"invariant_test_acc", it},
                              {"free_test_acc", ft},
                              {"delta_test_acc", it - ft},
                              {"invariant_train_acc", ir},
                              {"free_train_acc", fr},
                              {"delta_train_acc", ir - fr}});
    }
    deltas.flush();
    manifest["runs"] = runs;
    manifest["deltas"] = delta_json;
    write_json_file(options.out_dir / "manifest.json", manifest);
    rethrow_first(errors);
    return manifest;
}

namespace {

std::vector<AnsatzFamily> parse_families(const std::vector<std::string> &names, const std::string &where) {
    std::vector<AnsatzFamily> out;
    for (const auto &name : names) {
        try {
            out.push_back(parse_family(name));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

json cmd_vqe(const json &config, const RunOptions &options) {
    const json eff = effective_config(config, options.smoke);
    Fields f(eff, "vqe");
    const auto families = parse_families(f.strs("families", std::nullopt), "vqe");
    const auto ns = f.counts("n", std::nullopt);
    const auto ps = f.counts("p", std::nullopt);
    std::vector<std::uint64_t> default_seeds(20);
    for (std::size_t i = 0; i < default_seeds.size(); i++) {
        default_seeds[i] = i;
    }
    const auto seeds = f.counts("seeds", default_seeds);
    const double g = f.num("g", 1.0);
    VqeOptions vo;
    vo.lbfgs.max_iterations = f.count("max_iterations", vo.lbfgs.max_iterations);
    vo.lbfgs.gradient_tolerance = f.num("gradient_tolerance", vo.lbfgs.gradient_tolerance);
    f.done();
    require(g > 0, "vqe: g must be positive");

    struct Cell {
        AnsatzFamily family;
        std::size_t n, p;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    std::map<std::pair<std::string, std::size_t>, Hamiltonian> hams;
    for (auto fam : families) {
        for (auto n : ns) {
            for (auto p : ps) {
                try {
                    AnsatzSpec{fam, n, p}.validate();
                    const auto key = std::make_pair(family_model(fam), std::size_t(n));
                    if (!hams.count(key)) {
                        hams.emplace(key, build_hamiltonian(key.first, n, g));
                    }
                } catch (const std::invalid_argument &e) {
                    throw ConfigError(std::string("vqe: ") + e.what());
                }
                require(n <= 12, "vqe: exact diagonalization supports at most 12 sites");
                for (auto s : seeds) {
                    cells.push_back({fam, n, p, s});
                }
            }
        }
    }
    std::map<std::pair<std::string, std::size_t>, double> exact;
    for (const auto &[key, h] : hams) {
        exact[key] = exact_ground_energy(h);
    }

    json manifest = base_manifest("vqe", config, eff, options);
    std::vector<VqeResult> results(cells.size());
    const auto errors = parallel_for(cells.size(), options.threads, [&](std::size_t i) {
        const Cell &c = cells[i];
        const auto key = std::make_pair(family_model(c.family), c.n);
        VqeOptions o = vo;
        o.exact_energy = exact.at(key);
        results[i] = minimize_energy(hams.at(key), {c.family, c.n, c.p}, c.seed, o);
    });

    CsvWriter csv(options.out_dir / "vqe.csv",
                  {"family", "N", "p", "seed", "final_energy", "exact_energy", "iterations", "fn_evals"});
    json summary = json::array();
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<std::size_t>> groups;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> group_order;
    for (std::size_t i = 0; i < cells.size(); i++) {
        if (errors[i]) {
            continue;
        }
        const Cell &c = cells[i];
        const VqeResult &r = results[i];
        csv.row({family_name(c.family), std::to_string(c.n), std::to_string(c.p), std::to_string(c.seed),
                 format_double(r.energy), format_double(r.exact_energy), std::to_string(r.iterations),
                 std::to_string(r.evaluations)});
        const auto key = std::make_tuple(static_cast<std::size_t>(c.family), c.n, c.p);
        if (!groups.count(key)) {
            group_order.push_back(key);
        }
        groups[key].push_back(i);
    }
    csv.flush();
    for (const auto &key : group_order) {
        double mean_e = 0, mean_it = 0, best = 1e300;
        for (std::size_t i : groups[key]) {
            mean_e += results[i].energy;
            mean_it += static_cast<double>(results[i].iterations);
            best = std::min(best, results[i].energy);
        }
        const double k = static_cast<double>(groups[key].size());
        summary.push_back({{"family", family_name(static_cast<AnsatzFamily>(std::get<0>(key)))},
                           {"N", std::get<1>(key)},
                           {"p", std::get<2>(key)},
                           {"mean_energy", mean_e / k},
                           {"best_energy", best},
                           {"exact_energy", results[groups[key].front()].exact_energy},
                           {"mean_iterations", mean_it / k}});
        log_of(options) << summary.back().dump() << "\n";
    }
    manifest["summary"] = summary;
    write_json_file(options.out_dir / "manifest.json", manifest);
    rethrow_first(errors);
    return manifest;
}

json cmd_barren(const json &config, const RunOptions &options) {
    const json eff = effective_config(config, options.smoke);
    Fields f(eff, "barren");
    const auto families = parse_families(f.strs("families", std::nullopt), "barren");
    const auto ns = f.counts("n", std::nullopt);
    const std::size_t p = f.count("p");
    const std::size_t samples = f.count("samples", 1000);
    const std::uint64_t seed = f.count("seed", 0);
    f.done();
    require(samples >= 2, "barren: samples must be at least 2");
    for (auto fam : families) {
        for (auto n : ns) {
            try {
                AnsatzSpec{fam, n, p}.validate();
            } catch (const std::invalid_argument &e) {
                throw ConfigError(std::string("barren: ") + e.what());
            }
        }
    }

    json manifest = base_manifest("barren", config, eff, options);
    // One cell per (family, N) so the pool has work to share.
    std::vector<std::pair<AnsatzFamily, std::size_t>> cells;
    for (auto fam : families) {
        for (auto n : ns) {
            cells.emplace_back(fam, n);
        }
    }
    std::vector<BarrenPoint> points(cells.size());
    const auto errors = parallel_for(cells.size(), options.threads, [&](std::size_t i) {
        points[i] = barren_variance(cells[i].first, {cells[i].second}, p, samples, seed).front();
    });
    rethrow_first(errors);

    CsvWriter csv(options.out_dir / "barren.csv", {"family", "N", "variance", "stderr"});
    json slopes = json::object();
    for (std::size_t fi = 0; fi < families.size(); fi++) {
        std::vector<BarrenPoint> mine;
        for (std::size_t i = 0; i < cells.size(); i++) {
            if (cells[i].first == families[fi]) {
                const auto &pt = points[i];
                csv.row({family_name(families[fi]), std::to_string(pt.n), format_double(pt.variance),
                         format_double(pt.stderr_variance)});
                mine.push_back(pt);
            }
        }
        if (mine.size() >= 2) {
            slopes[family_name(families[fi])] = log_variance_slope(mine);
        }
    }
    csv.flush();
    log_of(options) << "log-variance slopes: " << slopes.dump() << "\n";
    manifest["log_variance_slopes"] = slopes;
    write_json_file(options.out_dir / "manifest.json", manifest);
    return manifest;
}

json cmd_dataset(const json &config, const RunOptions &options) {
    const json eff = effective_config(config, options.smoke);
    Fields f(eff, "dataset");
    const std::string name = f.str("dataset");
    require(name == "ttt" || name == "driving", "dataset: dataset must be \"ttt\" or \"driving\"");
    std::optional<SplitSpec> split_spec;
    if (f.has("split")) {
        Fields s(eff.at("split"), "dataset.split");
        SplitSpec spec;
        spec.train_size = s.count("train_size");
        spec.test_size = s.count("test_size");
        spec.seed = s.count("seed", 0);
        spec.allow_duplicates = s.flag("allow_duplicates", false);
        s.done();
        split_spec = spec;
    }
    f.done();

    std::vector<std::array<double, kBoardCells>> features;
    std::vector<std::string> labels;
    std::vector<std::size_t> classes;
    std::size_t num_classes = 0;
    std::vector<std::string> class_names;
    if (name == "ttt") {
        for (const auto &g : enumerate_ttt()) {
            std::array<double, kBoardCells> x{};
            std::copy(g.board.begin(), g.board.end(), x.begin());
            features.push_back(x);
            labels.push_back(ttt_class_name(g.label));
            classes.push_back(static_cast<std::size_t>(g.label));
        }
        num_classes = 3;
        class_names = {"circle", "draw", "cross"};
    } else {
        for (const auto &s : enumerate_driving()) {
            features.push_back(s.grid);
            labels.push_back(format_double(s.difficulty));
            classes.push_back(s.difficulty_index());
        }
        num_classes = kDifficulties.size();
        for (double d : kDifficulties) {
            class_names.push_back(format_double(d));
        }
    }
    Split split;
    if (split_spec) {
        try {
            split = balanced_split(classes, num_classes, *split_spec);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("dataset: ") + e.what());
        }
    }

    json manifest = base_manifest("dataset", config, eff, options);
    std::vector<std::string> header;
    for (std::size_t i = 0; i < kBoardCells; i++) {
        header.push_back("f" + std::to_string(i));
    }
    header.push_back("label");
    CsvWriter csv(options.out_dir / "dataset.csv", header);
    std::vector<std::size_t> histogram(num_classes, 0);
    for (std::size_t i = 0; i < features.size(); i++) {
        std::vector<std::string> row;
        for (double v : features[i]) {
            row.push_back(format_double(v));
        }
        row.push_back(labels[i]);
        csv.row(row);
        histogram[classes[i]]++;
    }
    csv.flush();
    auto &log = log_of(options);
    log << name << ": " << features.size() << " items\n";
    json hist = json::object();
    for (std::size_t k = 0; k < num_classes; k++) {
        log << "  " << class_names[k] << ": " << histogram[k] << "\n";
        hist[class_names[k]] = histogram[k];
    }
    manifest["count"] = features.size();
    manifest["histogram"] = hist;
    if (split_spec) {
        const json split_json = {{"seed", split_spec->seed},
                                 {"train_size", split_spec->train_size},
                                 {"test_size", split_spec->test_size},
                                 {"allow_duplicates", split_spec->allow_duplicates},
                                 {"train", split.train},
                                 {"test", split.test}};
        write_json_file(options.out_dir / "split.json", split_json);
        manifest["split"] = split_json;
    }
    write_json_file(options.out_dir / "manifest.json", manifest);
    return manifest;
}

int run_command(const std::string &command, const fs::path &config_path, const RunOptions &options) {
    auto &err = std::cerr;
    try {
        json config;
        try {
            config = read_json_file(config_path);
        } catch (const std::exception &e) {
            throw ConfigError(e.what());
        }
        if (command == "twirl") {
            cmd_twirl(config, options);
        } else if (command == "train") {
            cmd_train(config, options);
        } else if (command == "vqe") {
            cmd_vqe(config, options);
        } else if (command == "barren") {
            cmd_barren(config, options);
        } else if (command == "dataset") {
            cmd_dataset(config, options);
        } else {
            throw ConfigError("unknown command '" + command + "'");
        }
        return kExitOk;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergenceError &e) {
        err << "divergence at step " << e.step() << ": " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception &e) {
        err << "runtime error: " << e.what() << "\n";
        return kExitDivergence;
    }
}

}  // namespace symmqvar

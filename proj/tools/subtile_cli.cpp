// subtile: one-dimensional substitution tilings on infinite alphabets,
// driven by bounded integer coefficient sequences. Subcommands solve the
// inflation data of a sequence, design a sequence for a prescribed
// inflation factor, generate and decompose supertiles, run the invariant
// suite, and render patches or self-similar point sets as SVG.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "subtile/subtile.hpp"

namespace {

using namespace subtile;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitArgument = 4;
constexpr int kExitProperty = 5;

struct RunConfig {
    std::string sequence_spec;
    std::string lambda_expr;
    std::string word_arg;
    std::string output_path;
    std::string format = "json";
    long precision_bits = 0;  // 0: take the env default
    int digits = 30;
    unsigned level = 3;
    unsigned design_digits = 300;
    std::uint64_t letter = 0;
    std::uint64_t budget = kDefaultWordBudget;
    std::uint64_t table = 10;
    std::size_t matrix_size = 120;
    double window = 50.0;
    bool delone = false;
    long seed = 12345;
};

long env_precision_default() {
    if (const char* env = std::getenv("SUBTILE_PRECISION_BITS")) {
        return std::strtol(env, nullptr, 10);
    }
    return 192;
}

PrecisionPolicy policy_of(const RunConfig& cfg) {
    return PrecisionPolicy{static_cast<Prec>(cfg.precision_bits), kPrecCap};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read file '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

CoefficientSequence parse_sequence_arg(const std::string& arg) {
    if (arg.empty()) throw InvalidArgument("missing --seq");
    if (arg == "thue-morse" || arg == "thue_morse") return CoefficientSequence::thue_morse();
    std::string text = arg;
    if (arg[0] == '@') text = slurp(arg.substr(1));
    Json j = Json::parse(text, nullptr, true);
    return sequence_from_json(j);
}

Word parse_word_arg(const std::string& arg) {
    if (arg.empty()) throw InvalidArgument("missing --word");
    std::string text = arg;
    if (arg[0] == '@') text = slurp(arg.substr(1));
    return word_from_json(Json::parse(text, nullptr, true));
}

void emit(const RunConfig& cfg, const std::string& payload) {
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream out(cfg.output_path);
    if (!out) throw InvalidArgument("cannot write file '" + cfg.output_path + "'");
    out << payload;
}

Json header_json(const RunConfig& cfg, const char* command) {
    Json j;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["precision_bits"] = cfg.precision_bits;
    return j;
}

// certified common decimal prefix of the two interval endpoints
std::string common_decimal_prefix(const Interval& x, int digits) {
    std::string lo = x.lo().to_string(digits, MPFR_RNDD);
    std::string hi = x.hi().to_string(digits, MPFR_RNDU);
    std::size_t n = 0;
    while (n < lo.size() && n < hi.size() && lo[n] == hi[n]) ++n;
    return lo.substr(0, n);
}

Dyadic width_from_digits(int digits) {
    return Dyadic::from_string("1e-" + std::to_string(digits + 5), 96, MPFR_RNDD);
}

int cmd_solve(const RunConfig& cfg) {
    CoefficientSequence seq = parse_sequence_arg(cfg.sequence_spec);
    ValidationReport rep = validate(seq);
    if (!rep.ok) {
        std::cerr << "validation failed: " << rep.message << " (witness index " << rep.witness
                  << ")\n";
        return kExitValidation;
    }
    PrecisionPolicy pol = policy_of(cfg);
    InflationData data = solve_mu(seq, width_from_digits(cfg.digits), pol);

    Json j = header_json(cfg, "solve");
    j["sequence"] = sequence_to_json(seq);
    j["validation"] = rep.coverage == ValidationReport::Coverage::Proven ? "proven"
                                                                         : "window-verified";
    j["mu"] = interval_to_json(data.mu, cfg.digits + 2);
    j["lambda"] = interval_to_json(data.lambda, cfg.digits + 2);
    j["lambda_decimal"] = common_decimal_prefix(data.lambda, cfg.digits);
    j["mu_decimal"] = common_decimal_prefix(data.mu, cfg.digits);

    auto lengths = tile_length_table(data, cfg.table, default_length_width(), pol);
    Json lens = Json::array();
    for (const Interval& l : lengths) lens.push_back(interval_to_json(l, 25));
    j["tile_lengths"] = std::move(lens);

    auto freqs = frequency_vector(data, cfg.table);
    Json fr = Json::array();
    for (const Interval& f : freqs) fr.push_back(interval_to_json(f, 25));
    j["frequencies"] = std::move(fr);

    emit(cfg, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_design(const RunConfig& cfg) {
    Interval lambda = parse_lambda_expression(cfg.lambda_expr,
                                              static_cast<Prec>(cfg.precision_bits) + 64);
    if (!(lambda.lo() > Dyadic::of_long(2))) {
        std::cerr << "design requires lambda > 2\n";
        return kExitArgument;
    }
    PrecisionPolicy pol = policy_of(cfg);
    DesignResult res = design_sequence(lambda, cfg.design_digits, pol);
    InflationData back = solve_mu(res.seq, width_from_digits(cfg.digits), pol);

    Json j = header_json(cfg, "design");
    j["lambda_target"] = interval_to_json(lambda, cfg.digits + 2);
    j["parameters"]["C"] = res.params.spike_period_c;
    j["parameters"]["N"] = res.params.digit_cap_n;
    j["parameters"]["mu"] = interval_to_json(res.params.mu, cfg.digits + 2);
    j["parameters"]["mu_prime"] = interval_to_json(res.params.mu_prime, cfg.digits + 2);
    j["sequence"] = sequence_to_json(res.seq);
    j["residual"] = interval_to_json(res.expansion.residual, 25);
    j["lambda_recovered"] = interval_to_json(back.lambda, cfg.digits + 2);
    Interval err = sub(back.lambda, lambda, 256).abs_hull();
    j["round_trip_error_hi"] = err.hi().to_string(8, MPFR_RNDU);

    emit(cfg, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_generate(const RunConfig& cfg) {
    CoefficientSequence seq = parse_sequence_arg(cfg.sequence_spec);
    require_valid(seq);
    Word w = supertile(seq, Letter::isolated(cfg.letter), cfg.level, cfg.budget);
    if (cfg.format == "json") {
        Json j = header_json(cfg, "generate");
        j["sequence"] = sequence_to_json(seq);
        j["level"] = cfg.level;
        j["letter"] = cfg.letter;
        j["length"] = w.size();
        j["word"] = word_to_json(w);
        emit(cfg, j.dump(2) + "\n");
        return kExitOk;
    }
    PrecisionPolicy pol = policy_of(cfg);
    InflationData data = solve_mu(seq, default_mu_width(), pol);
    Patch patch = realize(data, w, Interval::of_long(0), default_length_width(), pol);
    if (cfg.format == "csv") {
        emit(cfg, patch_csv(patch));
        return kExitOk;
    }
    if (cfg.format == "svg") {
        emit(cfg, patch_svg(patch));
        return kExitOk;
    }
    std::cerr << "unknown format '" << cfg.format << "'\n";
    return kExitArgument;
}

int cmd_decompose(const RunConfig& cfg) {
    CoefficientSequence seq = parse_sequence_arg(cfg.sequence_spec);
    require_valid(seq);
    Word w = parse_word_arg(cfg.word_arg);
    Decomposition d = decompose_levelk(seq, w, cfg.level);
    Json j = header_json(cfg, "decompose");
    j["sequence"] = sequence_to_json(seq);
    j["level"] = cfg.level;
    Json body = decomposition_to_json(d);
    j["left"] = std::move(body["left"]);
    j["supertiles"] = std::move(body["supertiles"]);
    j["right"] = std::move(body["right"]);
    emit(cfg, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_render(const RunConfig& cfg) {
    CoefficientSequence seq = parse_sequence_arg(cfg.sequence_spec);
    require_valid(seq);
    PrecisionPolicy pol = policy_of(cfg);
    InflationData data = solve_mu(seq, default_mu_width(), pol);
    if (cfg.delone) {
        auto fp = fixed_point_delone(data, Dyadic::of_double(cfg.window), cfg.budget,
                                     default_length_width(), pol);
        emit(cfg, delone_svg(fp.points, cfg.window));
        return kExitOk;
    }
    Word w = supertile(seq, Letter::isolated(cfg.letter), cfg.level, cfg.budget);
    Patch patch = realize(data, w, Interval::of_long(0), default_length_width(), pol);
    emit(cfg, patch_svg(patch));
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    CoefficientSequence seq = parse_sequence_arg(cfg.sequence_spec);
    PrecisionPolicy pol = policy_of(cfg);
    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed));
    bool all_ok = true;
    Json checks = Json::array();
    auto report = [&](const char* name, bool ok, const std::string& detail) {
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name
                  << (detail.empty() ? "" : ": " + detail) << "\n";
        Json c;
        c["name"] = name;
        c["ok"] = ok;
        if (!detail.empty()) c["detail"] = detail;
        checks.push_back(std::move(c));
        all_ok = all_ok && ok;
    };

    ValidationReport rep = validate(seq);
    report("validate", rep.ok, rep.ok ? "" : rep.message);
    if (!rep.ok) {
        std::cout << "verification aborted\n";
        return kExitValidation;
    }

    InflationData data = solve_mu(seq, default_mu_width(), pol);
    report("solve", true, "lambda in " + data.lambda.to_string(20));

    {  // left eigenvector residuals over interior columns
        const std::size_t m = cfg.matrix_size;
        auto op = truncated_matrix(seq, m);
        auto lengths = tile_length_table(data, m - 1, default_length_width(), pol);
        const Prec p = 256;
        bool ok = true;
        for (std::size_t j = 1; j + 1 < m && ok; ++j) {
            Interval acc = Interval::of_long(0);
            for (std::size_t i = 0; i < m; ++i) {
                if (op.at(i, j) == 0) continue;
                acc = add(acc, mul(Interval::of_long(op.at(i, j)), lengths[i], p), p);
            }
            ok = sub(acc, mul(data.lambda, lengths[j], p), p).contains_zero();
        }
        report("left-eigenvector", ok, "");
    }

    {  // right eigenvector identity
        const Prec p = 256;
        bool ok = true;
        for (long i = 1; i <= static_cast<long>(cfg.matrix_size) && ok; ++i) {
            Interval lhs = add(data.mu.pow_si(i - 1, p), data.mu.pow_si(i + 1, p), p);
            ok = sub(lhs, mul(data.lambda, data.mu.pow_si(i, p), p), p).contains_zero();
        }
        report("right-eigenvector", ok, "");
    }

    {  // Delone bounds against mu^{C+1}
        bool ok = true;
        std::string detail;
        try {
            auto [mn, mx] = delone_bounds(data, 100, default_length_width(), pol);
            detail = "min " + mn.to_string(8) + ", max " + mx.to_string(8);
        } catch (const DeloneViolation& e) {
            ok = false;
            detail = e.what();
        }
        report("delone-bounds", ok, detail);
    }

    {  // inflation residual on random legal words
        Word big = supertile(seq, Letter::isolated(0), 7, 1u << 22);
        bool ok = true;
        for (int t = 0; t < 5 && ok; ++t) {
            std::size_t len = std::min<std::size_t>(big.size(), 1 + rng() % 1000);
            std::size_t start = big.size() == len ? 0 : rng() % (big.size() - len);
            Word w(big.begin() + start, big.begin() + start + len);
            ok = verify_inflation(data, w, default_length_width(), pol).contains_zero();
        }
        report("inflation-residual", ok, "");
    }

    {  // fixed-point containment
        auto fp = fixed_point_delone(data, Dyadic::of_double(cfg.window), cfg.budget,
                                     default_length_width(), pol);
        Dyadic maxw = Dyadic::of_long(0);
        for (const Interval& pt : fp.points) maxw = std::max(maxw, pt.width());
        Dyadic tol = std::max(Dyadic::mul(maxw, Dyadic::of_long(3), 64, MPFR_RNDU),
                              Dyadic::from_string("1e-25", 64, MPFR_RNDD));
        const Prec p = 256;
        bool ok = !fp.points.empty();
        for (const Interval& pt : fp.points) {
            Interval scaled = mul(fp.scale, pt, p);
            if (scaled.lo() > Dyadic::of_double(cfg.window) || scaled.hi().sgn() < 0) continue;
            bool hit = false;
            for (const Interval& q : fp.points) {
                if (sub(scaled, q, p).abs_hull().lo() <= tol) {
                    hit = true;
                    break;
                }
            }
            ok = ok && hit;
        }
        report("fixed-point-containment", ok,
               "points " + std::to_string(fp.points.size()) + ", power " +
                   std::to_string(fp.power));
    }

    {  // empirical frequency convergence toward (1 - mu)
        double target = sub(Interval::of_long(1), data.mu, 128).midpoint().to_double();
        unsigned k = 2;
        while (supertile_size(seq, 0, k + 1) <= 100000) ++k;
        double early = std::abs(empirical_frequencies(data, k / 2).exact.at(0).get_d() - target);
        double late = std::abs(empirical_frequencies(data, k).exact.at(0).get_d() - target);
        report("frequency-convergence", late < early || late < 1e-3,
               "error " + std::to_string(late) + " at level " + std::to_string(k));
    }

    {  // power iteration on the truncated corner approximates lambda
        auto op = truncated_matrix(seq, std::max<std::size_t>(cfg.matrix_size, 60));
        Interval est = power_iteration(op);
        double err = std::abs(est.midpoint().to_double() - data.lambda.midpoint().to_double());
        report("power-iteration", err < 1e-5, "corner estimate off by " + std::to_string(err));
    }

    {  // quasicompactness counting bound at k = C + 2
        const long c = seq.zero_run_c();
        const unsigned k = static_cast<unsigned>(c) + 2;
        const mpz_class bound = mpz_class(1) << k;
        bool ok = true;
        for (std::uint64_t i = 0; i <= 30 && ok; ++i) {
            auto counts = supertile_counts(seq, i, k);
            mpz_class outside = 0, total = 0;
            for (std::size_t t = 0; t < counts.size(); ++t) {
                total += counts[t];
                if (t > static_cast<std::size_t>(c) + 1) outside += counts[t];
            }
            ok = outside <= bound && total >= bound + 1;
        }
        report("quasicompactness-count", ok, "");
    }

    Json j = header_json(cfg, "verify");
    j["sequence"] = sequence_to_json(seq);
    j["lambda"] = interval_to_json(data.lambda, 32);
    j["checks"] = std::move(checks);
    j["ok"] = all_ok;
    emit(cfg, j.dump(2) + "\n");
    return all_ok ? kExitOk : kExitProperty;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"substitution tilings on infinite compact alphabets"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.precision_bits = env_precision_default();

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--precision", cfg.precision_bits, "working precision in bits [64, 4096]");
        cmd->add_option("--seed", cfg.seed, "seed for randomized checks");
        cmd->add_option("--output", cfg.output_path, "output path (default stdout)");
    };

    CLI::App* solve = app.add_subcommand("solve", "inflation data of a coefficient sequence");
    solve->add_option("--seq", cfg.sequence_spec, "sequence spec (JSON, @file, or thue-morse)")
        ->required();
    solve->add_option("--digits", cfg.digits, "decimal digits for mu and lambda");
    solve->add_option("--table", cfg.table, "tile-length/frequency table size");
    add_common(solve);

    CLI::App* design = app.add_subcommand("design", "construct a sequence for a prescribed lambda");
    design->add_option("--lambda", cfg.lambda_expr, "pi | e | sqrt:n | p/q | decimal")->required();
    design->add_option("--digits", cfg.design_digits, "number of greedy digits");
    add_common(design);

    CLI::App* generate = app.add_subcommand("generate", "materialize a level-k supertile");
    generate->add_option("--seq", cfg.sequence_spec, "sequence spec")->required();
    generate->add_option("--level", cfg.level, "substitution level k");
    generate->add_option("--letter", cfg.letter, "seed letter index");
    generate->add_option("--budget", cfg.budget, "letter budget");
    generate->add_option("--format", cfg.format, "json | csv | svg");
    add_common(generate);

    CLI::App* decompose = app.add_subcommand("decompose", "supertile decomposition of a word");
    decompose->add_option("--seq", cfg.sequence_spec, "sequence spec")->required();
    decompose->add_option("--word", cfg.word_arg, "word JSON (or @file)")->required();
    decompose->add_option("--level", cfg.level, "decomposition level k");
    add_common(decompose);

    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("--seq", cfg.sequence_spec, "sequence spec")->required();
    verify->add_option("--matrix-size", cfg.matrix_size, "truncated matrix size");
    verify->add_option("--window", cfg.window, "fixed-point window length");
    add_common(verify);

    CLI::App* render = app.add_subcommand("render", "SVG of a patch or a Delone set");
    render->add_option("--seq", cfg.sequence_spec, "sequence spec")->required();
    render->add_option("--level", cfg.level, "substitution level for patch rendering");
    render->add_option("--letter", cfg.letter, "seed letter index");
    render->add_flag("--delone", cfg.delone, "render the fixed-point Delone set instead");
    render->add_option("--window", cfg.window, "Delone window length");
    render->add_option("--budget", cfg.budget, "letter budget");
    add_common(render);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitArgument;
    }

    if (cfg.precision_bits < 64 || cfg.precision_bits > 4096) {
        std::cerr << "precision must lie in [64, 4096]\n";
        return kExitArgument;
    }

    try {
        if (solve->parsed()) return cmd_solve(cfg);
        if (design->parsed()) return cmd_design(cfg);
        if (generate->parsed()) return cmd_generate(cfg);
        if (decompose->parsed()) return cmd_decompose(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (render->parsed()) return cmd_render(cfg);
    } catch (const ValidationFailure& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NotLegal& e) {
        std::cerr << "illegal word: " << e.what() << "\n";
        return kExitValidation;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const NonConvergent& e) {
        std::cerr << "non-convergent evaluation: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const NoSignChange& e) {
        std::cerr << "no sign change: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const NoConvergence& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const DeloneViolation& e) {
        std::cerr << "delone violation: " << e.what() << "\n";
        return kExitProperty;
    } catch (const InternalInconsistency& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kExitProperty;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitArgument;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitArgument;
    } catch (const Json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return kExitArgument;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgument;
    }
    return kExitArgument;
}

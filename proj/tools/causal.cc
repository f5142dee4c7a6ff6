#include <causal/canonical.hh>
#include <causal/correlations.hh>
#include <causal/enumeration.hh>
#include <causal/errors.hh>
#include <causal/games.hh>
#include <causal/graph_io.hh>
#include <causal/process_io.hh>
#include <causal/report.hh>
#include <causal/soc_model.hh>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <thread>

using namespace causal;

namespace
{
    struct Common
    {
        unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
        std::string format = "json";
        std::uint64_t budget = ScanOptions{}.budget;
        bool unlimited = false;

        auto scan() const -> ScanOptions
        {
            return ScanOptions{budget, unlimited, jobs};
        }
    };

    auto add_common(CLI::App * cmd, Common & c, bool with_format) -> void
    {
        cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--budget", c.budget, "Refuse scans above this many elementary steps");
        cmd->add_flag("--unlimited", c.unlimited, "Ignore the scan budget");
        if (with_format)
            cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
    }

    auto parse_players(const std::string & text, int n) -> NodeSet
    {
        NodeSet s;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            std::size_t used = 0;
            int v = -1;
            try {
                v = std::stoi(item, &used);
            }
            catch (const std::logic_error &) {
                used = 0;
            }
            if (used == 0 || used != item.size() || v < 0 || v >= n)
                throw InputError("bad party '" + item + "' in --S");
            s.insert(v);
        }
        return s;
    }

    auto emit(const Json & j) -> void
    {
        std::cout << j.dump() << '\n';
    }

    struct AnalyzeArgs
    {
        std::string path;
        bool verify = true;
        bool games = false;
    };

    auto cmd_analyze(const AnalyzeArgs & a, const Common & c) -> void
    {
        auto g = read_graph_file(a.path);
        ClassifyOptions options{a.verify && ! g.has_self_loop(), a.games, c.scan()};
        auto record = classify(g, options);
        if (c.format == "tsv")
            std::cout << record_tsv_header() << '\n' << record_tsv(record) << '\n';
        else {
            Json j = record_json(record);
            j["graph"] = graph_json(g);
            emit(j);
        }
    }

    struct SurveyArgs
    {
        int n = 0;
        bool verify = false;
        bool games = false;
        bool allow_self_loops = false;
        bool include_six = false;
        bool include_seven = false;
        std::string resume;
    };

    auto load_resume(const std::string & path, int n) -> std::map<CanonicalForm, ClassificationRecord>
    {
        std::ifstream in(path);
        if (! in)
            throw InputError("cannot open " + path);
        std::map<CanonicalForm, ClassificationRecord> done;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            Json j;
            try {
                j = Json::parse(line);
            }
            catch (const Json::exception &) {
                // an interrupted run may leave a torn last line
                continue;
            }
            if (j.contains("summary"))
                continue;
            auto r = record_from_json(j);
            if (r.form.n != n)
                throw InputError(path + ":" + std::to_string(line_no) + ": record is for " + std::to_string(r.form.n) + " nodes");
            done.emplace(r.form, r);
        }
        return done;
    }

    auto cmd_survey(const SurveyArgs & a, Common c) -> void
    {
        if (a.n == 6 && ! a.include_six)
            throw InputError("surveying six nodes is a long run; pass --include-six");
        if (a.n == 7 && ! a.include_seven)
            throw InputError("surveying seven nodes needs --include-seven");
        if (a.verify && a.allow_self_loops)
            throw InputError("--verify needs self-loop-free enumeration; drop --allow-self-loops");
        if (! a.resume.empty() && c.format != "json")
            throw InputError("--resume reads and writes JSON lines; use --format json");

        SurveyOptions options;
        options.classify = ClassifyOptions{a.verify, a.games, c.scan()};
        options.allow_self_loops = a.allow_self_loops;
        options.allow_seven = a.include_seven;
        options.jobs = c.jobs;

        std::map<CanonicalForm, ClassificationRecord> done;
        if (! a.resume.empty())
            done = load_resume(a.resume, a.n);
        for (auto & [f, r] : done)
            options.skip.insert(f);

        auto fresh = survey(a.n, options);
        for (auto & r : fresh)
            done.emplace(r.form, r);

        SurveySummary summary;
        if (c.format == "tsv")
            std::cout << record_tsv_header() << '\n';
        for (auto & [f, r] : done) {
            summary.add(r);
            if (c.format == "tsv")
                std::cout << record_tsv(r) << '\n';
            else
                emit(record_json(r));
        }
        if (c.format == "tsv")
            std::cout << summary.to_string(a.verify) << '\n';
        else {
            Json j = summary_json(summary);
            j["summary"]["text"] = summary.to_string(a.verify);
            emit(j);
        }
    }

    struct VerifyArgs
    {
        std::string path;
        bool force = false;
    };

    auto cmd_verify(const VerifyArgs & a, const Common & c) -> void
    {
        auto g = read_graph_file(a.path);
        auto v = verify_consistency(g, VerifyOptions{c.scan(), a.force});
        if (c.format == "tsv") {
            std::cout << to_string(v.kind) << '\t' << v.experiments;
            if (v.mu)
                std::cout << '\t' << v.mu->to_string();
            std::cout << '\n';
        }
        else {
            Json j{{"graph", graph_json(g)}};
            Json verdict = verdict_json(v);
            for (auto & [k, value] : verdict.items())
                j[k] = value;
            emit(j);
        }
    }

    struct GameArgs
    {
        std::string path;
        std::string players;
        std::uint64_t seed = 1;
        std::uint64_t samples = 2000;
    };

    auto cmd_game(const GameArgs & a, const Common & c) -> void
    {
        auto g = read_graph_file(a.path);
        SocModel model(g);

        std::optional<Cycle> cycle;
        NodeSet players;
        if (a.players.empty()) {
            cycle = find_violation_cycle(g);
            if (! cycle)
                throw InputError("graph has no cycle whose common parents all lie on it; pass --S");
            players = cycle->node_set();
        }
        else {
            players = parse_players(a.players, g.size());
            for (auto & candidate : enumerate_cycles(g)) {
                NodeSet copa = common_parents(g, candidate.node_set());
                if (candidate.node_set() == players && ! copa.empty() && copa.is_subset_of(players)) {
                    cycle = candidate;
                    break;
                }
            }
        }

        GameSpec spec(g.size(), players);
        auto w = model.table();
        Json j;
        if (cycle) {
            auto strategy = build_violation_strategy(g, *cycle, spec);
            j = game_json(spec, play(spec, w, strategy), &strategy);
            j["strategy"] = "violation-cycle";
        }
        else {
            auto found = random_strategy_search(spec, w, a.samples, a.seed);
            j = game_json(spec, found.best);
            j["strategy"] = "random-search";
            j["samples"] = found.samples;
            j["seed"] = a.seed;
        }
        if (c.format == "tsv")
            std::cout << "bound\t" << to_string(causal_bound(spec)) << "\nwin\t"
                << j["win"]["num"].get<std::int64_t>() << '/' << j["win"]["den"].get<std::int64_t>() << "\nviolated\t"
                << j["violated"].get<bool>() << '\n';
        else
            emit(j);
    }

    struct FixedPointArgs
    {
        std::string graph_path, mu_path;
    };

    auto cmd_fixed_point(const FixedPointArgs & a, const Common & c) -> void
    {
        auto g = read_graph_file(a.graph_path);
        SocModel model(g);
        auto mu = read_experiment_file(a.mu_path);
        auto w = model.table();
        check_experiment(w.alphabet(), mu);
        auto point = recursive_fixed_point(model, mu);
        auto scanned = fixed_points(w, mu);
        if (c.format == "tsv") {
            std::cout << "alpha_point";
            for (auto v : point)
                std::cout << '\t' << v;
            std::cout << '\n';
        }
        else {
            Json points = Json::array();
            for (auto & p : scanned)
                points.push_back(assignment_json(p));
            emit(Json{{"alpha_point", assignment_json(point)}, {"fixed_points", points},
                {"agrees", scanned.size() == 1 && scanned.front() == point}});
        }
    }

    struct ProcessArgs
    {
        std::string path;
        bool lift = false;
    };

    auto cmd_process(const ProcessArgs & a, const Common & c) -> void
    {
        auto w = read_process_file(a.path);
        auto verdict = is_process(w, c.scan());
        auto antinomies = antinomy_report(w, c.scan());
        Json j{{"valid", verdict.valid}, {"nonsignaling", is_nonsignaling(w)}};
        if (verdict.counterexample) {
            j["counterexample"] = experiment_json(*verdict.counterexample);
            j["fixed_points"] = verdict.fixed_point_count;
        }
        j["antinomies"] = Json{{"grandparent", antinomies.grandparent}, {"information", antinomies.information},
            {"equivalent", antinomies.equivalence_holds()}, {"signaling_warning", antinomies.signaling_warning}};
        if (a.lift) {
            Json entries = Json::array();
            for (auto & e : quantum_lift(w))
                entries.push_back(Json{{"o", e.output}, {"i", e.input}});
            j["lift"] = entries;
        }
        if (c.format == "tsv") {
            std::cout << "valid\t" << verdict.valid << "\nnonsignaling\t" << is_nonsignaling(w) << "\ngrandparent\t"
                << antinomies.grandparent << "\ninformation\t" << antinomies.information << '\n';
            if (verdict.counterexample)
                std::cout << "counterexample\t" << verdict.counterexample->to_string() << '\t' << verdict.fixed_point_count << '\n';
        }
        else
            emit(j);
    }

    struct ModelArgs
    {
        std::string path;
    };

    auto cmd_model(const ModelArgs & a) -> void
    {
        std::cout << format_process(SocModel(read_graph_file(a.path)).table());
    }

    struct EvaluateArgs
    {
        std::string process_path, instrument_path;
    };

    auto cmd_evaluate(const EvaluateArgs & a, const Common & c) -> void
    {
        auto table = evaluate(read_process_file(a.process_path), read_instrument_file(a.instrument_path));
        if (c.format == "tsv")
            std::cout << correlation_tsv(table);
        else
            emit(correlation_json(table));
    }

    struct DecomposeArgs
    {
        std::string graph_path, instrument_path, process_path;
    };

    auto cmd_decompose(const DecomposeArgs & a, const Common & c) -> void
    {
        auto g = read_graph_file(a.graph_path);
        auto w = a.process_path.empty() ? SocModel(g).table() : read_process_file(a.process_path);
        auto inst = read_instrument_file(a.instrument_path);
        auto d = peel_decompose(w, g, inst, c.scan());
        if (reconstruct(d, inst) != evaluate(w, inst))
            throw InvariantViolation("decomposition does not reproduce the evaluated correlations");
        emit(decomposition_json(d));
    }
}

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{"Classify causal structures, verify deterministic processes and play causal games"};
    app.require_subcommand(1);

    Common common;

    AnalyzeArgs analyze;
    auto analyze_cmd = app.add_subcommand("analyze", "Classify one graph file");
    analyze_cmd->add_option("graph", analyze.path, "Graph file")->required();
    analyze_cmd->add_flag("--verify,!--no-verify", analyze.verify, "Scan every experiment of the selection model");
    analyze_cmd->add_flag("--games", analyze.games, "Play the guessing game on the violation cycle");
    add_common(analyze_cmd, common, true);

    SurveyArgs survey_args;
    auto survey_cmd = app.add_subcommand("survey", "Classify every digraph on n nodes up to isomorphism");
    survey_cmd->add_option("n", survey_args.n, "Node count")->required()->check(CLI::Range(1, 7));
    survey_cmd->add_flag("--verify", survey_args.verify, "Scan every class, SOC or not");
    survey_cmd->add_flag("--games", survey_args.games, "Play the guessing game on violation cycles");
    survey_cmd->add_flag("--allow-self-loops", survey_args.allow_self_loops, "Include graphs with self-loops");
    survey_cmd->add_flag("--include-six", survey_args.include_six, "Allow the long six-node run");
    survey_cmd->add_flag("--include-seven", survey_args.include_seven, "Allow the seven-node enumeration");
    survey_cmd->add_option("--resume", survey_args.resume, "Partial JSON-lines output to continue from");
    add_common(survey_cmd, common, false);
    survey_cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "tsv"}))
        ->default_str("tsv");

    VerifyArgs verify;
    auto verify_cmd = app.add_subcommand("verify", "Check consistency of the selection model on a graph");
    verify_cmd->add_option("graph", verify.path, "Graph file")->required();
    verify_cmd->add_flag("--force", verify.force, "Scan even when the graph is not siblings-on-cycles");
    add_common(verify_cmd, common, true);

    GameArgs game;
    auto game_cmd = app.add_subcommand("game", "Play the guessing game on the selection model of a graph");
    game_cmd->add_option("graph", game.path, "Graph file")->required();
    game_cmd->add_option("--S", game.players, "Comma separated player set");
    game_cmd->add_option("--seed", game.seed, "Seed for the random strategy search");
    game_cmd->add_option("--samples", game.samples, "Instruments tried by the random strategy search");
    add_common(game_cmd, common, true);

    FixedPointArgs fixed;
    auto fixed_cmd = app.add_subcommand("fixed-point", "Predicted and scanned fixed points for one experiment");
    fixed_cmd->add_option("graph", fixed.graph_path, "Graph file")->required();
    fixed_cmd->add_option("mu", fixed.mu_path, "Experiment file")->required();
    add_common(fixed_cmd, common, true);

    ProcessArgs process;
    auto process_cmd = app.add_subcommand("process", "Validity and antinomies of a tabulated process");
    process_cmd->add_option("table", process.path, "Process file")->required();
    process_cmd->add_flag("--lift", process.lift, "List the diagonal entries of the operator form");
    add_common(process_cmd, common, true);

    ModelArgs model;
    auto model_cmd = app.add_subcommand("model", "Print the selection model of a graph as a process file");
    model_cmd->add_option("graph", model.path, "Graph file")->required();

    EvaluateArgs eval;
    auto eval_cmd = app.add_subcommand("evaluate", "Correlations of a process with an instrument");
    eval_cmd->add_option("table", eval.process_path, "Process file")->required();
    eval_cmd->add_option("instrument", eval.instrument_path, "Instrument file")->required();
    add_common(eval_cmd, common, true);

    DecomposeArgs decompose;
    auto decompose_cmd = app.add_subcommand("decompose", "Peel a chordless SOC process into a causal decomposition");
    decompose_cmd->add_option("graph", decompose.graph_path, "Graph file")->required();
    decompose_cmd->add_option("instrument", decompose.instrument_path, "Instrument file")->required();
    decompose_cmd->add_option("--process", decompose.process_path, "Process file; defaults to the selection model");
    add_common(decompose_cmd, common, false);

    // survey is the one command whose default output is for humans
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "survey") {
            common.format = "tsv";
            break;
        }

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError & e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze_cmd)
            cmd_analyze(analyze, common);
        else if (*survey_cmd)
            cmd_survey(survey_args, common);
        else if (*verify_cmd)
            cmd_verify(verify, common);
        else if (*game_cmd)
            cmd_game(game, common);
        else if (*fixed_cmd)
            cmd_fixed_point(fixed, common);
        else if (*process_cmd)
            cmd_process(process, common);
        else if (*model_cmd)
            cmd_model(model);
        else if (*eval_cmd)
            cmd_evaluate(eval, common);
        else if (*decompose_cmd)
            cmd_decompose(decompose, common);
    }
    catch (const InputError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const BudgetExceeded & e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 3;
    }
    catch (const InvariantViolation & e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 4;
    }
    return 0;
}

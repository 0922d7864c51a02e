#include <jetad/cli.hpp>

#include <jetad/ad_macro.hpp>
#include <jetad/eval.hpp>
#include <jetad/oracle/corpus.hpp>
#include <jetad/parser.hpp>
#include <jetad/primops.hpp>
#include <jetad/printer.hpp>
#include <jetad/syntax.hpp>
#include <jetad/typecheck.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#ifndef JETAD_DEFAULT_PROGRAMS_DIR
#define JETAD_DEFAULT_PROGRAMS_DIR "programs"
#endif

namespace jetad::cli {

namespace {

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class OracleFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_numbers(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("'" + item + "' is not a number");
        }
    }
    return out;
}

struct Options
{
    std::string file;
    std::string expr;
    std::string ops_file;
    std::vector<std::string> vars;

    std::size_t k = 1;
    unsigned r = 1;
    std::string mode = "full";
    bool normalize = false;
    std::string format = "surface";
    bool multiline = false;

    std::string inputs;
    std::string point;
    std::string directions;

    std::string programs_dir = JETAD_DEFAULT_PROGRAMS_DIR;
    std::string report = "text";
    std::uint64_t seed = 20240607;
    std::size_t points = 5;
};

class Driver
{
public:
    Driver(const Options& opts, std::ostream& out) : o_(opts), out_(out)
    {
        if (!o_.ops_file.empty()) {
            owned_ = std::make_unique<Registry>(builtin_registry(2));
            load_op_file(read_file(o_.ops_file), *owned_);
        }
    }

    const Registry* registry() const { return owned_ ? owned_.get() : &default_registry(); }

    Term source_term() const
    {
        if (!o_.expr.empty() && !o_.file.empty()) throw UsageError("give either a file or --expr, not both");
        if (o_.expr.empty() && o_.file.empty()) throw UsageError("no program given (file argument or --expr)");
        ParseOptions po;
        po.registry = registry();
        return parse_term(o_.expr.empty() ? read_file(o_.file) : o_.expr, po);
    }

    Context context() const
    {
        Context ctx;
        for (const auto& v : o_.vars) {
            auto colon = v.find(':');
            if (colon == std::string::npos) throw UsageError("--var expects name:type, got '" + v + "'");
            auto name = v.substr(0, colon);
            name.erase(0, name.find_first_not_of(' '));
            name.erase(name.find_last_not_of(' ') + 1);
            try {
                ctx.add(name, parse_type(v.substr(colon + 1)));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
        return ctx;
    }

    MacroConfig config() const
    {
        MacroConfig cfg;
        if (o_.mode == "full") {
            cfg = MacroConfig::full(o_.k, o_.r, registry());
        } else if (o_.mode == "restricted22") {
            cfg = MacroConfig::restricted22(registry());
            cfg.k = o_.k;
            cfg.order = o_.r;
        } else {
            throw UsageError("--mode must be full or restricted22");
        }
        try {
            cfg.validate();
        } catch (const MacroError& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }

    int check()
    {
        auto ctx = context();
        auto t = source_term();
        out_ << to_string(infer(ctx, t, registry())) << "\n";
        return ok;
    }

    int transform()
    {
        auto cfg = config();
        auto ctx = context();
        auto t = source_term();
        Type type = infer(ctx, t, registry());
        Term d = d_term(cfg, t);
        if (o_.normalize) d = normalize(d);
        d = surface_names(d);
        const auto text = pretty(d, {o_.multiline});
        if (o_.format == "json") {
            nlohmann::json ctx_json = nlohmann::json::object();
            const auto dctx = d_context(cfg, ctx);
            for (const auto& [n, ty] : dctx.entries()) ctx_json[n] = to_string(ty);
            out_ << nlohmann::json{{"type", to_string(d_type(cfg, type))}, {"context", ctx_json}, {"term", text}}.dump(2)
                 << "\n";
        } else if (o_.format == "surface") {
            out_ << text << "\n";
        } else {
            throw UsageError("--format must be surface or json");
        }
        return ok;
    }

    int evaluate()
    {
        auto ctx = context();
        auto t = source_term();
        Type type = infer(ctx, t, registry());
        nlohmann::json inputs = nlohmann::json::object();
        if (!o_.inputs.empty()) {
            try {
                inputs = nlohmann::json::parse(read_file(o_.inputs));
            } catch (const nlohmann::json::parse_error& e) {
                throw UsageError(std::string("inputs are not valid JSON: ") + e.what());
            }
        }
        nlohmann::json args = nlohmann::json::array();
        if (inputs.is_object() && inputs.contains("args") && !ctx.contains("args")) {
            args = inputs.at("args");
            inputs.erase("args");
        }
        Value v = eval(env_from_json(inputs, ctx), t, registry());
        for (const auto& a : args) {
            if (!type.is_function()) throw UsageError("too many arguments for a program of type " + to_string(type));
            v = apply(v, value_from_json(a, type.domain()), registry());
            type = type.codomain();
        }
        out_ << to_json(v).dump() << "\n";
        return ok;
    }

    int jet()
    {
        auto cfg = config();
        auto ctx = context();
        auto t = source_term();
        auto fo = [&] {
            try {
                return first_order_view(t, ctx, registry());
            } catch (const EvalError& e) {
                throw UsageError(e.what());
            }
        }();
        auto point = parse_numbers(o_.point);
        if (point.size() != fo.ctx.size())
            throw UsageError("--point needs " + std::to_string(fo.ctx.size()) + " coordinates (" + names(fo.ctx) + ")");
        std::vector<std::vector<double>> dirs;
        std::stringstream ss(o_.directions);
        std::string row;
        while (std::getline(ss, row, ';')) dirs.push_back(parse_numbers(row));
        if (dirs.size() != cfg.k) throw UsageError("--directions needs " + std::to_string(cfg.k) + " rows separated by ';'");
        for (const auto& d : dirs)
            if (d.size() != point.size()) throw UsageError("each direction needs " + std::to_string(point.size()) + " entries");
        auto seeds = seed_affine(point, dirs, cfg.shape());
        auto jet = eval_jet_program(cfg, fo.body, fo.ctx, seeds);
        auto j = to_json(jet);
        nlohmann::json vars = nlohmann::json::array();
        for (const auto& [n, ty] : fo.ctx.entries()) vars.push_back(n);
        j["variables"] = vars;
        out_ << j.dump() << "\n";
        return ok;
    }

    int selftest()
    {
        std::vector<oracle::CorpusProgram> corpus;
        try {
            corpus = oracle::load_corpus(o_.programs_dir, registry());
        } catch (const std::filesystem::filesystem_error& e) {
            throw UsageError(e.what());
        }
        if (corpus.empty()) throw UsageError("no *.ad programs in '" + o_.programs_dir + "'");
        oracle::SelftestOptions so;
        so.seed = o_.seed;
        so.points = o_.points;
        so.registry = registry();
        for (auto& c : so.configs) c.registry = registry();
        auto report = oracle::run_selftest(corpus, so);
        if (o_.report == "json") {
            out_ << report.to_json().dump(2) << "\n";
        } else {
            std::map<std::pair<std::string, std::string>, std::pair<std::size_t, double>> summary;
            for (const auto& c : report.cases) {
                auto& [fails, worst] = summary[{c.program, c.check + " " + c.config}];
                if (!c.comparison.pass) ++fails;
                worst = std::max(worst, c.comparison.max_rel_err);
            }
            for (const auto& [key, v] : summary)
                out_ << (v.first ? "FAIL " : "ok   ") << key.first << " " << key.second << "  max rel err "
                     << v.second << "\n";
            out_ << report.cases.size() << " cases, " << report.failures() << " failures\n";
        }
        if (!report.pass) throw OracleFailure(std::to_string(report.failures()) + " oracle comparisons failed");
        return ok;
    }

private:
    const Options& o_;
    std::ostream& out_;
    std::unique_ptr<Registry> owned_;

    static std::string names(const Context& ctx)
    {
        std::string s;
        for (const auto& [n, t] : ctx.entries()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }
};

void add_source(CLI::App* cmd, Options& o)
{
    cmd->add_option("file", o.file, "Program source file ('-' for stdin)");
    cmd->add_option("-e,--expr", o.expr, "Program source text");
    cmd->add_option("--var", o.vars, "Free variable declaration name:type (repeatable)");
}

void add_macro(CLI::App* cmd, Options& o)
{
    cmd->add_option("--k", o.k, "Jet dimension k")->check(CLI::Range(1, 9));
    cmd->add_option("--r", o.r, "Jet order R")->check(CLI::PositiveNumber);
    cmd->add_option("--mode", o.mode, "full or restricted22")->check(CLI::IsMember({"full", "restricted22"}));
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Taylor-mode forward AD for a small typed functional language", "jetad"};
    app.require_subcommand(1);
    app.add_option("--ops", o.ops_file, "File of extra primitive operations");

    auto* check = app.add_subcommand("check", "Print the type of a program");
    add_source(check, o);

    auto* transform = app.add_subcommand("transform", "Print the (k,R) derivative program");
    add_source(transform, o);
    add_macro(transform, o);
    transform->add_flag("--normalize", o.normalize, "Contract beta and tuple-match redexes");
    transform->add_option("--format", o.format, "surface or json")->check(CLI::IsMember({"surface", "json"}));
    transform->add_flag("--multiline", o.multiline, "Break let/match chains over lines");

    auto* evalc = app.add_subcommand("eval", "Evaluate a program");
    add_source(evalc, o);
    evalc->add_option("--inputs", o.inputs, "JSON file binding free variables (and \"args\")");

    auto* jetc = app.add_subcommand("jet", "Compute the jet of a first-order program along affine seeds");
    add_source(jetc, o);
    add_macro(jetc, o);
    jetc->add_option("--point", o.point, "Comma-separated point")->required();
    jetc->add_option("--directions", o.directions, "k comma-separated rows separated by ';'")->required();

    auto* self = app.add_subcommand("selftest", "Check macro jets against the numeric oracles on the corpus");
    self->add_option("--programs", o.programs_dir, "Directory of *.ad programs");
    self->add_option("--report", o.report, "text or json")->check(CLI::IsMember({"text", "json"}));
    self->add_option("--seed", o.seed, "Sample point seed");
    self->add_option("--points", o.points, "Sample points per program")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "jetad: " << e.what() << "\n";
        return usage;
    }

    try {
        Driver d(o, out);
        if (*check) return d.check();
        if (*transform) return d.transform();
        if (*evalc) return d.evaluate();
        if (*jetc) return d.jet();
        if (*self) return d.selftest();
        return usage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return parse_error;
    } catch (const TypeError& e) {
        err << "type error: " << e.what() << "\n";
        return type_error;
    } catch (const EvalError& e) {
        err << "evaluation error: " << e.what() << "\n";
        return type_error;
    } catch (const RegistryError& e) {
        err << "op error: " << e.what() << "\n";
        return usage;
    } catch (const MacroError& e) {
        err << "macro error: " << e.what() << "\n";
        return usage;
    } catch (const OracleFailure& e) {
        err << "selftest: " << e.what() << "\n";
        return oracle_failure;
    } catch (const UsageError& e) {
        err << "jetad: " << e.what() << "\n";
        return usage;
    }
}

} // namespace jetad::cli

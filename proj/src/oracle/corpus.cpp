#include <jetad/oracle/corpus.hpp>

#include <jetad/oracle/numeric.hpp>
#include <jetad/parser.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace jetad::oracle {

CorpusProgram load_program(const std::string& name, const std::string& source, const Registry* registry)
{
    ParseOptions opts;
    opts.registry = registry;
    Term t = parse_term(source, opts);
    Type ty = infer(Context{}, t, registry);
    return {name, t, ty, first_order_view(t, Context{}, registry)};
}

std::vector<CorpusProgram> load_corpus(const std::filesystem::path& dir, const Registry* registry)
{
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ad") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<CorpusProgram> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream ss;
        ss << in.rdbuf();
        out.push_back(load_program(f.stem().string(), ss.str(), registry));
    }
    return out;
}

std::size_t SelftestReport::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(cases.begin(), cases.end(), [](const CaseResult& c) { return !c.comparison.pass; }));
}

nlohmann::json SelftestReport::to_json() const
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cases) {
        arr.push_back({{"program", c.program},
                       {"check", c.check},
                       {"config", c.config},
                       {"point", c.point_index},
                       {"pass", c.comparison.pass},
                       {"max_rel_err", c.comparison.max_rel_err},
                       {"coeffs", oracle::to_json(c.comparison)["coeffs"]}});
    }
    return {{"pass", pass}, {"cases", cases.size()}, {"failures", failures()}, {"results", arr}};
}

namespace {

std::string config_name(const MacroConfig& cfg)
{
    std::string s = "(" + std::to_string(cfg.k) + "," + std::to_string(cfg.order) + ")";
    if (cfg.mode == MacroConfig::Mode::restricted22) s += "'";
    return s;
}

} // namespace

SelftestReport run_selftest(const std::vector<CorpusProgram>& corpus, const SelftestOptions& options)
{
    SelftestReport report;
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> point_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> dir_dist(-1.0, 1.0);

    auto record = [&](const std::string& program, const std::string& check, const std::string& config,
                      std::size_t point, JetComparison cmp) {
        report.pass = report.pass && cmp.pass;
        report.cases.push_back({program, check, config, point, std::move(cmp)});
    };

    for (const auto& prog : corpus) {
        const auto& fo = prog.program;
        const std::size_t n = fo.ctx.size();

        std::vector<Term> transformed;
        for (const auto& cfg : options.configs) transformed.push_back(d_term(cfg, fo.body));
        const auto full22 = MacroConfig::full(2, 2, options.registry);
        const auto restricted = MacroConfig::restricted22(options.registry);
        const auto one_two = MacroConfig::full(1, 2, options.registry);
        const Term d_full22 = d_term(full22, fo.body);
        const Term d_restricted = d_term(restricted, fo.body);
        const Term d_one_two = d_term(one_two, fo.body);

        for (std::size_t p = 0; p < options.points; ++p) {
            std::vector<double> point(n);
            for (auto& x : point) x = point_dist(rng);
            std::vector<std::vector<double>> dirs(2, std::vector<double>(n));
            for (auto& row : dirs)
                for (auto& x : row) x = dir_dist(rng);

            for (std::size_t c = 0; c < options.configs.size(); ++c) {
                const auto& cfg = options.configs[c];
                const auto shape = cfg.shape();
                std::vector<std::vector<double>> d(dirs.begin(), dirs.begin() + static_cast<long>(cfg.k));
                while (d.size() < cfg.k) {
                    std::vector<double> row(n);
                    for (auto& x : row) x = dir_dist(rng);
                    d.push_back(std::move(row));
                }
                auto seeds = seed_affine(point, d, shape);
                auto macro = eval_transformed(cfg, transformed[c], fo.ctx, seeds);
                auto fd = fd_jet(fo, point, d, shape, {}, options.registry);
                record(prog.name, "fd", config_name(cfg), p, compare_jets(macro, fd, options.fd_tolerance));
            }

            {
                auto seeds = seed_affine(point, {dirs[0]}, one_two.shape());
                auto macro = eval_transformed(one_two, d_one_two, fo.ctx, seeds);
                auto iterated = iterated_dual_jet(fo, point, dirs[0], 2, options.registry);
                record(prog.name, "iterated", "(1,2)", p, compare_jets(macro, iterated, options.iterated_tolerance));
            }

            {
                auto full = eval_transformed(full22, d_full22, fo.ctx, seed_affine(point, dirs, full22.shape()));
                auto restr = eval_transformed(restricted, d_restricted, fo.ctx,
                                              seed_affine(point, dirs, restricted.shape()));
                JetVector projected(restricted.shape());
                for (std::size_t i = 0; i < projected.shape().size(); ++i)
                    projected[i] = full.at(projected.shape().coords()[i]);
                record(prog.name, "restricted", "(2,2)'", p,
                       compare_jets(restr, projected, options.restricted_tolerance));
            }
        }
    }
    return report;
}

} // namespace jetad::oracle

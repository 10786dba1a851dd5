// teamlogic: command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "teamlogic/atoms.hpp"
#include "teamlogic/branching.hpp"
#include "teamlogic/eso.hpp"
#include "teamlogic/syntax.hpp"
#include "teamlogic/teamsem.hpp"

using namespace teamlogic;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A formula argument is a file path when such a file exists, else the text itself.
Formula formula_arg(const std::string& arg)
{
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) return parse_formula(read_file(arg));
    return parse_formula(arg);
}

struct Common {
    std::string semantics = "lax";
    std::uint64_t seed = 1;
    int jobs = 0;
    std::uint64_t budget = 10'000'000;

    Semantics mode() const { return parse_semantics(semantics); }
    EvalOptions eval() const { return {mode(), budget, true}; }
};

struct EntailArgs {
    std::string atoms_file;
    std::string goal;
    std::string mode = "both";
    std::string engine = "auto";
    std::size_t max_rows = 4;
    std::vector<std::size_t> domains;
    std::uint64_t cap = std::uint64_t{1} << 22;
    std::size_t samples = 20'000;
    std::size_t max_steps = 1'000'000;
};

bool all_of_kind(const std::vector<AtomStatement>& T, const AtomStatement& goal, AtomKind kind)
{
    if (goal.kind != kind) return false;
    for (const auto& a : T)
        if (a.kind != kind) return false;
    return true;
}

bool unconditional(const std::vector<AtomStatement>& T, const AtomStatement& goal)
{
    if (!goal.is_unconditional_simple()) return false;
    for (const auto& a : T)
        if (!a.is_unconditional_simple()) return false;
    return true;
}

std::string pick_engine(const std::string& requested, const std::vector<AtomStatement>& T, const AtomStatement& goal)
{
    const bool dep = all_of_kind(T, goal, AtomKind::Dep);
    const bool ind = unconditional(T, goal);
    if (requested == "auto") return dep ? "armstrong" : ind ? "independence" : "closure";
    if (requested == "armstrong" && !dep) throw Error("armstrong engine needs dependence atoms only");
    if (requested == "independence" && !ind)
        throw Error("independence engine needs unconditional independence atoms only");
    if (requested != "armstrong" && requested != "independence" && requested != "closure")
        throw Error("unknown engine '" + requested + "'");
    return requested;
}

void print_counterexample(const std::vector<AtomStatement>& T, const AtomStatement& goal, const std::string& engine)
{
    if (engine == "armstrong") {
        if (auto t = counterexample_armstrong(T, goal)) {
            std::cout << "counterexample (domain {0,1}):\n" << to_text(*t, Structure::of_size(2));
        }
    } else if (engine == "independence") {
        if (auto c = counterexample_independence(T, goal)) {
            std::cout << "counterexample structure:\n" << to_text(c->structure);
            std::cout << "counterexample team:\n" << to_text(c->team, c->structure);
        }
    }
}

int cmd_entail(const EntailArgs& a, const Common& common)
{
    const auto T = parse_atom_set(read_file(a.atoms_file));
    const auto goal = parse_atom(a.goal);
    if (a.mode != "syntactic" && a.mode != "semantic" && a.mode != "both")
        throw Error("--mode must be syntactic, semantic or both");
    bool positive = true;
    if (a.mode != "semantic") {
        const auto engine = pick_engine(a.engine, T, goal);
        Derivation d;
        if (engine == "armstrong") {
            d = armstrong_derives(T, goal);
        } else if (engine == "independence") {
            d = independence_derives(T, goal);
        } else {
            const auto c = rule_closure(T, a.max_steps, universe_of(T, &goal));
            d.derived = c.contains(goal);
            if (d.derived) d.trace = c.derivation_of(goal);
            if (c.truncated) std::cout << "note: closure truncated after " << a.max_steps << " steps\n";
        }
        std::cout << (d.derived ? "DERIVED" : "NOT DERIVED") << " (" << engine << ")\n";
        if (d.derived)
            std::cout << d.trace.to_string();
        else
            print_counterexample(T, goal, engine);
        positive = positive && d.derived;
    }
    if (a.mode != "syntactic") {
        EntailConfig cfg;
        cfg.domain_sizes = a.domains;
        cfg.max_rows = a.max_rows;
        cfg.cap = a.cap;
        cfg.samples = a.samples;
        cfg.seed = common.seed;
        const auto v = semantic_entails(T, goal, cfg);
        std::cout << (v.entailed ? "ENTAILED" : "NOT ENTAILED") << " (" << (v.exact ? "exact" : "bounded") << "; "
                  << v.bound << "; " << v.teams_checked << " teams)\n";
        if (v.countermodel) {
            std::cout << "countermodel (domain size " << v.countermodel_domain << "):\n"
                      << to_text(*v.countermodel, Structure::of_size(v.countermodel_domain));
        }
        positive = positive && v.entailed;
    }
    return positive ? kExitTrue : kExitFalse;
}

int cmd_closure(const std::string& atoms_file, const std::string& goal_text, std::size_t max_steps)
{
    const auto T = parse_atom_set(read_file(atoms_file));
    std::optional<AtomStatement> goal;
    if (!goal_text.empty()) goal = parse_atom(goal_text);
    const auto c = rule_closure(T, max_steps, universe_of(T, goal ? &*goal : nullptr));
    if (goal) {
        const bool in = c.contains(*goal);
        std::cout << (in ? "DERIVED" : "NOT DERIVED") << "\n";
        if (in) std::cout << c.derivation_of(*goal).to_string();
        return in ? kExitTrue : kExitFalse;
    }
    const auto atoms = c.atoms();
    std::cout << atoms.size() << " atoms" << (c.truncated ? " (truncated)" : "") << "\n";
    for (const auto& a : atoms) std::cout << a.to_string() << "\n";
    return kExitTrue;
}

int cmd_counterexample(const std::string& atoms_file, const std::string& goal_text)
{
    const auto T = parse_atom_set(read_file(atoms_file));
    const auto goal = parse_atom(goal_text);
    const auto engine = pick_engine("auto", T, goal);
    if (engine == "closure") throw Error("counterexamples need dependence atoms only or unconditional independence");
    const bool derived = engine == "armstrong" ? armstrong_derives(T, goal).derived : independence_derives(T, goal).derived;
    if (derived) {
        std::cout << "DERIVED: no counterexample\n";
        return kExitFalse;
    }
    print_counterexample(T, goal, engine);
    return kExitTrue;
}

std::vector<std::string> split_words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

Assignment parse_assignment(const std::string& text, const Structure& st)
{
    Assignment s;
    for (auto w : split_words(text)) {
        for (auto& ch : w)
            if (ch == ',') ch = ' ';
        for (const auto& item : split_words(w)) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw Error("assignment entries look like name=element");
            s.scope.push_back(item.substr(0, eq));
            s.values.push_back(st.element(item.substr(eq + 1)));
        }
    }
    return s;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Model checker and inference engine for dependence and independence logic"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--semantics", common.semantics, "strict or lax")
        ->check(CLI::IsMember({"strict", "lax"}))
        ->capture_default_str();
    app.add_option("--seed", common.seed, "Seed for every randomized search")->capture_default_str();
    app.add_option("--jobs", common.jobs, "Worker threads (0: OpenMP default)");
    app.add_option("--budget", common.budget, "Evaluator candidate budget")->capture_default_str();

    std::string structure_file, team_file, formula, scope, assign;

    auto* eval = app.add_subcommand("eval", "Evaluate a formula on a structure and team");
    eval->add_option("structure", structure_file)->required();
    eval->add_option("team", team_file)->required();
    eval->add_option("formula", formula, "Formula text or file")->required();

    EntailArgs ea;
    auto* entail = app.add_subcommand("entail", "Decide entailment between atoms");
    entail->add_option("atoms", ea.atoms_file)->required();
    entail->add_option("--goal", ea.goal)->required();
    entail->add_option("--mode", ea.mode, "syntactic, semantic or both")->capture_default_str();
    entail->add_option("--engine", ea.engine, "auto, armstrong, independence or closure")->capture_default_str();
    entail->add_option("--max-rows", ea.max_rows)->capture_default_str();
    entail->add_option("--domains", ea.domains, "Domain sizes for the semantic search");
    entail->add_option("--team-cap", ea.cap)->capture_default_str();
    entail->add_option("--samples", ea.samples)->capture_default_str();
    entail->add_option("--max-steps", ea.max_steps)->capture_default_str();

    std::string closure_goal;
    std::size_t closure_steps = 1'000'000;
    auto* closure = app.add_subcommand("closure", "Forward-chain the rule inventory");
    closure->add_option("atoms", ea.atoms_file)->required();
    closure->add_option("--goal", closure_goal);
    closure->add_option("--max-steps", closure_steps)->capture_default_str();

    auto* cex = app.add_subcommand("counterexample", "Build the completeness-proof counterexample");
    cex->add_option("atoms", ea.atoms_file)->required();
    cex->add_option("--goal", ea.goal)->required();

    std::size_t max_size = 4;
    std::uint64_t structure_cap = std::uint64_t{1} << 16;
    auto* validity = app.add_subcommand("validity", "Search for countermodels of a sentence");
    validity->add_option("formula", formula)->required();
    validity->add_option("--max-size", max_size)->capture_default_str();
    validity->add_option("--structure-cap", structure_cap)->capture_default_str();

    auto* translate_cmd = app.add_subcommand("translate", "Print the existential second-order translation");
    translate_cmd->add_option("formula", formula)->required();
    translate_cmd->add_option("--scope", scope, "Team variables, space separated");

    EsoOptions eso_opts;
    auto* eso = app.add_subcommand("eso-check", "Compare team semantics with the translated sentence");
    eso->add_option("structure", structure_file)->required();
    eso->add_option("team", team_file)->required();
    eso->add_option("formula", formula)->required();
    eso->add_option("--ground-cap", eso_opts.ground_cap)->capture_default_str();

    std::size_t max_domain = 5;
    auto* branch = app.add_subcommand("branch", "Skolem and compositional verdicts for a branching prefix");
    branch->add_option("formula", formula)->required();
    branch->add_option("structure", structure_file)->required();
    branch->add_option("--assign", assign, "Outer assignment, e.g. \"z=0 w=1\"");
    branch->add_option("--max-domain", max_domain)->capture_default_str();

    auto* desugar_cmd = app.add_subcommand("desugar", "Expand slashed and branching quantifiers");
    desugar_cmd->add_option("formula", formula)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }
    if (common.jobs > 0) omp_set_num_threads(common.jobs);

    try {
        if (*eval) {
            const auto st = parse_structure(read_file(structure_file));
            const auto team = parse_team(read_file(team_file), st);
            const bool sat = evaluate(st, team, desugar(formula_arg(formula)), common.eval());
            std::cout << (sat ? "SAT" : "UNSAT") << " (" << to_string(common.mode()) << ")\n";
            return sat ? kExitTrue : kExitFalse;
        }
        if (*entail) return cmd_entail(ea, common);
        if (*closure) return cmd_closure(ea.atoms_file, closure_goal, closure_steps);
        if (*cex) return cmd_counterexample(ea.atoms_file, ea.goal);
        if (*validity) {
            ValidityOptions vo;
            vo.eval = common.eval();
            vo.structure_cap = structure_cap;
            const auto r = validity_search(formula_arg(formula), max_size, vo);
            if (r.valid) {
                std::cout << "VALID-UP-TO-" << r.max_size << " (" << to_string(common.mode()) << ")\n";
                return kExitTrue;
            }
            std::cout << "COUNTERMODEL size " << r.countermodel->size() << " (" << to_string(common.mode()) << ")\n"
                      << to_text(*r.countermodel);
            return kExitFalse;
        }
        if (*translate_cmd) {
            const auto f = desugar(formula_arg(formula));
            const auto vars = scope.empty() ? free_vars(f) : split_words(scope);
            std::cout << translate(f, VarTuple(vars)).to_string() << "\n";
            return kExitTrue;
        }
        if (*eso) {
            const auto st = parse_structure(read_file(structure_file));
            const auto team = parse_team(read_file(team_file), st);
            const auto r = check_translation(st, team, desugar(formula_arg(formula)), common.mode(), eso_opts);
            std::cout << "team semantics (" << to_string(common.mode()) << "): " << (r.team_value ? "SAT" : "UNSAT")
                      << "\n"
                      << "translation: " << (r.eso_value ? "SAT" : "UNSAT") << "\n"
                      << (r.agree() ? "AGREE" : "DISAGREE") << "\n";
            return r.agree() ? kExitTrue : kExitFalse;
        }
        if (*branch) {
            const auto st = parse_structure(read_file(structure_file));
            const auto r = check_lemma14(st, parse_assignment(assign, st), formula_arg(formula), common.mode(),
                                         max_domain);
            std::cout << "skolem: " << (r.skolem ? "true" : "false") << "\n"
                      << "compositional (" << to_string(common.mode()) << "): " << (r.compositional ? "true" : "false")
                      << "\n"
                      << (r.agree() ? "AGREE" : "DISAGREE") << "\n";
            return r.agree() ? kExitTrue : kExitFalse;
        }
        if (*desugar_cmd) {
            std::cout << to_string(desugar(formula_arg(formula))) << "\n";
            return kExitTrue;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

// topography: command-line front end. Every subcommand except `dot` writes one
// JSON document to stdout. Exit codes: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "topography/topography.hpp"

using json = nlohmann::ordered_json;
using namespace topography;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Parsing

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

BigInt parse_int(const std::string& text) {
    std::string t = text;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    std::size_t digits = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (t.size() == digits || t.find_first_not_of("0123456789", digits) != std::string::npos) {
        throw UsageError("not an integer: '" + text + "'");
    }
    return BigInt(t);
}

std::vector<BigInt> parse_ints(const std::string& text, char sep, std::size_t count, const std::string& what) {
    auto parts = split(text, sep);
    if (parts.size() != count) {
        throw UsageError(what + " needs " + std::to_string(count) + " integers separated by '" + std::string(1, sep) + "'");
    }
    std::vector<BigInt> out;
    for (const auto& p : parts) out.push_back(parse_int(p));
    return out;
}

Cluster<BigInt> parse_cluster(const std::string& text) {
    auto v = parse_ints(text, ':', 3, "--cluster");
    return {v[0], v[1], v[2]};
}

QuadForm parse_form(const std::string& text) {
    auto v = parse_ints(text, ',', 3, "--form");
    return QuadForm::from_coefficients(v[0], v[1], v[2]);
}

Farey parse_fraction(const std::string& text) {
    auto parts = split(text, '/');
    if (parts.size() == 1) return Farey(parse_int(parts[0]), BigInt(1));
    if (parts.size() != 2) throw UsageError("fraction must look like r/s: '" + text + "'");
    BigInt num = parse_int(parts[0]);
    BigInt den = parse_int(parts[1]);
    if (num == 0 && den == 0) throw UsageError("0/0 is not a fraction");
    return Farey(num, den);
}

double parse_double(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size()) throw UsageError("not a number: '" + text + "'");
    return v;
}

/// "1.5", "-2i", "0.3-0.1i".
Complex parse_complex(std::string text) {
    if (text.empty()) throw UsageError("empty complex number");
    if (text.back() != 'i') return Complex(parse_double(text), 0.0);
    text.pop_back();
    std::size_t cut = std::string::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    auto imag = [](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return parse_double(s);
    };
    if (cut == std::string::npos) return Complex(0.0, imag(text));
    return Complex(parse_double(text.substr(0, cut)), imag(text.substr(cut)));
}

template <std::size_t N>
std::array<Complex, N> parse_complexes(const std::string& text, const std::string& what) {
    auto parts = split(text, ',');
    if (parts.size() != N) throw UsageError(what + " needs " + std::to_string(N) + " comma-separated values");
    std::array<Complex, N> out;
    for (std::size_t k = 0; k < N; ++k) out[k] = parse_complex(parts[k]);
    return out;
}

MasterParams<BigInt> parse_params(const std::string& text) {
    if (text == "markov") return params::markov();
    if (text == "conway") return params::conway();
    if (text.rfind("conway:", 0) == 0) return params::conway(parse_int(text.substr(7)));
    auto v = parse_ints(text, ',', 8, "--params");
    MasterParams<BigInt> p;
    p.delta = {v[0], v[1], v[2]};
    p.sigma = {v[3], v[4], v[5]};
    p.zeta = v[6];
    p.tau = v[7];
    return p;
}

// ---------------------------------------------------------------------------
// Rendering

json big(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return static_cast<std::int64_t>(v);
    }
    return v.str();
}

json cluster_json(const Cluster<BigInt>& c) { return json::array({big(c[0]), big(c[1]), big(c[2])}); }

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

template <std::size_t N>
json complexes_json(const std::array<Complex, N>& zs) {
    json out = json::array();
    for (const auto& z : zs) out.push_back(complex_json(z));
    return out;
}

json tuple_json(const ReducedTuple& t) {
    json data;
    if (auto* w = std::get_if<WellVertex<BigInt>>(&t)) {
        data = {{"vertex", cluster_json(w->vertex)}, {"odd", w->odd}};
    } else if (auto* l = std::get_if<LakeVertex<BigInt>>(&t)) {
        data = {{"m", big(l->m)}, {"vertex", cluster_json(l->vertex)}, {"odd", l->odd}};
    } else if (auto* m = std::get_if<MouthPair<BigInt>>(&t)) {
        data = {{"left", {{"vertex", cluster_json(m->left.vertex)}, {"odd", m->left.odd}}},
                {"right", {{"vertex", cluster_json(m->right.vertex)}, {"odd", m->right.odd}}}};
    } else {
        data = json::array();
        for (const auto& b : std::get<BendCycle<BigInt>>(t).cycle) {
            data.push_back({{"before", cluster_json(b.before)}, {"after", cluster_json(b.after)}, {"slot", b.slot}});
        }
    }
    return {{"kind", tuple_kind(t)}, {"data", data}};
}

json form_json(const QuadForm& q) { return {{"a", big(q.a())}, {"b", big(q.b())}, {"c", big(q.c())}}; }

// ---------------------------------------------------------------------------
// Subcommands

struct FormInput {
    std::string form;
    std::string cluster;

    QuadForm get(const std::string& form_flag = "--form", const std::string& cluster_flag = "--cluster") const {
        if (form.empty() == cluster.empty()) throw UsageError("give exactly one of " + form_flag + " and " + cluster_flag);
        if (!form.empty()) return parse_form(form);
        Cluster<BigInt> c = parse_cluster(cluster);
        return QuadForm::from_cluster(c[0], c[1], c[2]);
    }
};

json run_reduce(const FormInput& in, std::size_t max_steps) {
    QuadForm q = in.get();
    Reduction r = reduce(q, ReduceOptions{max_steps});
    json clusters = json::array();
    for (const auto& c : r.log.clusters) clusters.push_back(cluster_json(c));
    json canonical = json::array();
    for (const auto& c : canonical_reduced_clusters(r.tuple)) canonical.push_back(cluster_json(c));
    return {{"form", form_json(q)},
            {"discriminant", big(discriminant(q))},
            {"word", r.log.word.to_string()},
            {"mutations", r.log.mutations},
            {"clusters", clusters},
            {"hops", r.log.hops},
            {"halted", r.log.halted},
            {"tuple", tuple_json(r.tuple)},
            {"canonical", canonical}};
}

json run_equiv(const FormInput& a, const FormInput& b, bool strict) {
    QuadForm q1 = a.get("--form1", "--cluster1");
    QuadForm q2 = b.get("--form2", "--cluster2");
    bool result = strict ? strict_equivalent(q1, q2) : equivalent(q1, q2);
    return {{"form1", form_json(q1)},
            {"form2", form_json(q2)},
            {"discriminants", json::array({big(discriminant(q1)), big(discriminant(q2))})},
            {"strict", strict},
            {"equivalent", result}};
}

json run_markov(int depth, const std::string& start) {
    if (depth < 0 || depth > 16) throw UsageError("--depth must be between 0 and 16");
    auto p = params::markov();
    Cluster<BigInt> s = start.empty() ? Cluster<BigInt>{1, 1, 1} : parse_cluster(start);
    auto piece = bfs(p, s, depth);
    json values = json::array();
    for (const auto& v : piece.values()) values.push_back(big(v));
    json residuals = json::array();
    std::set<BigInt> seen;
    for (const auto& c : piece.clusters) seen.insert(residual(p, c));
    for (const auto& r : seen) residuals.push_back(big(r));
    return {{"start", cluster_json(s)},
            {"depth", depth},
            {"values", values},
            {"clusters", piece.clusters.size()},
            {"edges", piece.edges.size()},
            {"pruned", piece.pruned},
            {"residuals", residuals}};
}

struct SequenceStep {
    int mutation = 0;   // 1..3, or 0 for a swap
    int a = 0, b = 0;   // swapped slots
    std::string label;
};

std::vector<SequenceStep> parse_sequence(const std::string& text) {
    std::vector<SequenceStep> out;
    for (std::string item : split(text, ',')) {
        item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
        SequenceStep s;
        if (item.size() == 1 && item[0] >= '1' && item[0] <= '3') {
            s.mutation = item[0] - '0';
            s.label = "mu" + item;
        } else if (item.size() == 4 && item[0] == '(' && item[3] == ')' && item[1] >= '1' && item[1] <= '3' &&
                   item[2] >= '1' && item[2] <= '3' && item[1] != item[2]) {
            s.a = item[1] - '0';
            s.b = item[2] - '0';
            s.label = item;
        } else {
            throw UsageError("sequence items are 1, 2, 3 or a swap like (23): '" + item + "'");
        }
        out.push_back(s);
    }
    return out;
}

struct LaurentOutcome {
    json doc;
    bool failed = false;
};

LaurentOutcome run_laurent(const std::string& params_text, const std::string& sequence, const std::string& at_text) {
    MasterParams<BigInt> p = parse_params(params_text);
    auto steps = parse_sequence(sequence);
    std::optional<std::array<BigRational, 3>> at;
    if (!at_text.empty()) {
        Cluster<BigInt> c = parse_cluster(at_text);
        at = std::array<BigRational, 3>{BigRational(c[0]), BigRational(c[1]), BigRational(c[2])};
    }

    LaurentOutcome out;
    json certs = json::array();
    Seed seed = Seed::identity(p);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& s = steps[k];
        try {
            seed = s.mutation ? mutate_seed(seed, s.mutation) : permute(seed, Perm3::swap(s.a, s.b));
        } catch (const TopographyError& e) {
            out.failed = true;
            out.doc["failure"] = {{"step", k + 1}, {"label", s.label}, {"error", e.name()}, {"message", e.what()}};
            break;
        }
        json entries = json::array();
        json terms = json::array();
        for (const auto& x : seed.cluster) {
            entries.push_back(x.to_string());
            terms.push_back(x.size());
        }
        json cert = {{"step", k + 1}, {"label", s.label}, {"cluster", entries}, {"terms", terms}};
        if (at) {
            json values = json::array();
            for (const auto& x : seed.cluster) values.push_back(x.eval(*at).str());
            cert["values"] = values;
        }
        certs.push_back(cert);
    }
    json doc = {{"params", params_text}, {"sequence", sequence}, {"laurent", !out.failed}, {"steps", certs}};
    if (out.failed) doc["failure"] = out.doc["failure"];
    out.doc = doc;
    return out;
}

json run_snake(const std::string& word_text, const std::string& fraction_text) {
    if (word_text.empty() == fraction_text.empty()) throw UsageError("give exactly one of --word and --fraction");
    Rattlesnake rs;
    json doc;
    if (!word_text.empty()) {
        Word w;
        try {
            w = Word::parse(word_text);
        } catch (const TopographyError& e) {
            throw UsageError(e.what());
        }
        rs = build_graph(w);
        doc["word"] = w.to_string();
        doc["fraction"] = word_to_fraction(w).to_string();
    } else {
        Farey q = parse_fraction(fraction_text);
        rs = fraction_to_rattlesnake(q);
        doc["word"] = rs.degenerate ? json(nullptr) : json(rs.word.to_string());
        doc["fraction"] = q.to_string();
    }
    std::size_t tiles = rs.degenerate ? 0 : rs.graph.tiles.size();
    MatchingCounts counts = tiles <= kBruteForceTileCap || rs.degenerate ? count_matchings_brute(rs)
                                                                          : count_matchings_fast(rs.word);
    doc["tiles"] = tiles;
    doc["total"] = big(counts.total);
    doc["rattle"] = big(counts.with_rattle);
    doc["counting"] = tiles <= kBruteForceTileCap || rs.degenerate ? "matchings" : "fraction";
    doc["northern"] = rs.ns == NorthSouth::Northern;
    doc["western"] = rs.ew == EastWest::Western;
    if (tiles <= kBruteForceTileCap || rs.degenerate) {
        Farey back = rattlesnake_to_fraction(rs);
        doc["round_trip"] = back.to_string();
    }
    return doc;
}

struct PviInput {
    std::string theta, kappa, a, point;
    int samples = 100;
    std::uint64_t seed = 1;
    std::string check = "relations";
    int depth = 2;
};

json relations_json(const pvi::RelationReport& r) {
    return {{"residual", r.residual},
            {"braid_squares", r.braid_squares},
            {"mutation_pairs", r.mutation_pairs},
            {"swap_braid", r.swap_braid},
            {"braid_square_pair", r.braid_square_pair},
            {"involution", r.involution},
            {"preservation", r.preservation},
            {"worst", r.worst()}};
}

// Relations that need only theta (no braid bookkeeping of a).
json theta_relations_json(const pvi::Point& x, const pvi::Theta& t) {
    double scale = pvi::scale_of(x, t);
    double pairs = pvi::relative_error(pvi::mu_pair(1, 2, pvi::mu_pair(2, 3, pvi::mu_pair(3, 1, x, t), t), t), x);
    double inv = 0.0, pres = 0.0;
    for (int i = 1; i <= 3; ++i) {
        inv = std::max(inv, pvi::relative_error(pvi::mutate(i, pvi::mutate(i, x, t), t), x));
        auto y = pvi::mutate(i, x, t);
        pres = std::max(pres, std::abs(pvi::residual(y, t)) / pvi::scale_of(y, t));
    }
    double res = std::abs(pvi::residual(x, t)) / scale;
    return {{"residual", res},
            {"mutation_pairs", pairs},
            {"involution", inv},
            {"preservation", pres},
            {"worst", std::max({res, pairs, inv, pres})}};
}

json run_pvi(const PviInput& in) {
    int given = int(!in.theta.empty()) + int(!in.kappa.empty()) + int(!in.a.empty());
    if (given != 1) throw UsageError("give exactly one of --theta, --kappa and --a");
    if (in.check != "relations" && in.check != "orbit") throw UsageError("--check is relations or orbit");
    if (in.samples < 1) throw UsageError("--samples must be positive");

    std::optional<std::array<Complex, 4>> a;
    pvi::Theta t;
    if (!in.theta.empty()) {
        t = parse_complexes<4>(in.theta, "--theta");
    } else {
        a = in.kappa.empty() ? parse_complexes<4>(in.a, "--a") : pvi::a_from_kappa(parse_complexes<4>(in.kappa, "--kappa")).a;
        t = pvi::theta_from_a(*a);
    }

    std::mt19937_64 rng(in.seed);
    std::vector<pvi::Point> points;
    if (!in.point.empty()) {
        auto xy = parse_complexes<2>(in.point, "--point");
        points.push_back(pvi::sample_point(t, xy[0], xy[1], true));
    } else {
        for (int n = 0; n < in.samples; ++n) {
            points.push_back(pvi::sample_point(t, pvi::random_in_disk(rng), pvi::random_in_disk(rng),
                                               std::bernoulli_distribution(0.5)(rng)));
        }
    }

    json doc;
    doc["theta"] = complexes_json(t);
    if (a) doc["a"] = complexes_json(*a);
    doc["check"] = in.check;
    if (in.check == "orbit") {
        json orbits = json::array();
        for (const auto& x : points) {
            json pts = json::array();
            for (const auto& y : pvi::orbit(x, t, in.depth)) pts.push_back(complexes_json(y));
            orbits.push_back({{"start", complexes_json(x)}, {"points", pts}});
        }
        doc["depth"] = in.depth;
        doc["orbits"] = orbits;
        return doc;
    }
    json rows = json::array();
    double worst = 0.0;
    for (const auto& x : points) {
        json row = a ? relations_json(pvi::check_relations(x, *a)) : theta_relations_json(x, t);
        worst = std::max(worst, row["worst"].get<double>());
        rows.push_back({{"point", complexes_json(x)}, {"errors", row}});
    }
    doc["braids"] = a.has_value();
    doc["points"] = rows;
    doc["worst"] = worst;
    doc["within_tolerance"] = worst <= 1e-9;
    return doc;
}

std::string run_dot(const FormInput& in, int depth) {
    if (depth < 0 || depth > 12) throw UsageError("--depth must be between 0 and 12");
    QuadForm q = in.get();
    auto piece = bfs(params::conway(discriminant(q)), q.cluster, depth);
    return to_dot(piece);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cluster topography: form reduction, topographs, snake graphs and Painleve VI checks"};
    app.require_subcommand(1);

    FormInput reduce_in;
    std::size_t max_steps = ReduceOptions{}.max_steps;
    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a binary quadratic form");
    reduce_cmd->add_option("--form", reduce_in.form, "Coefficients a,b,c of ax^2+bxy+cy^2");
    reduce_cmd->add_option("--cluster", reduce_in.cluster, "Cluster w:n:e");
    reduce_cmd->add_option("--max-steps", max_steps, "Cap on letters plus mutations");

    FormInput equiv_a, equiv_b;
    bool strict = false;
    auto* equiv_cmd = app.add_subcommand("equiv", "Decide equivalence of two forms");
    equiv_cmd->add_option("--form1", equiv_a.form, "First form a,b,c");
    equiv_cmd->add_option("--cluster1", equiv_a.cluster, "First form as a cluster w:n:e");
    equiv_cmd->add_option("--form2", equiv_b.form, "Second form a,b,c");
    equiv_cmd->add_option("--cluster2", equiv_b.cluster, "Second form as a cluster w:n:e");
    equiv_cmd->add_flag("--strict", strict, "Proper (SL2) equivalence");

    int markov_depth = 0;
    std::string markov_start;
    auto* markov_cmd = app.add_subcommand("markov", "Breadth-first Markov topograph");
    markov_cmd->add_option("--depth", markov_depth, "Number of mutation levels")->required();
    markov_cmd->add_option("--start", markov_start, "Start cluster w:n:e (default 1:1:1)");

    std::string laurent_params = "markov", laurent_sequence, laurent_at;
    auto* laurent_cmd = app.add_subcommand("laurent-check", "Mutate the identity seed and certify each step");
    laurent_cmd->add_option("--params", laurent_params, "markov, conway, conway:D or d1,d2,d3,s1,s2,s3,zeta,tau");
    laurent_cmd->add_option("--sequence", laurent_sequence, "Comma list of 1, 2, 3 and swaps like (23)")->required();
    laurent_cmd->add_option("--at", laurent_at, "Evaluate every entry at w:n:e");

    std::string snake_word, snake_fraction;
    auto* snake_cmd = app.add_subcommand("snake", "Snake graph and rattlesnake of a word or fraction");
    snake_cmd->add_option("--word", snake_word, "Word over L, R with optional leading S");
    snake_cmd->add_option("--fraction", snake_fraction, "Fraction r/s, 1/0 for infinity");

    PviInput pvi_in;
    auto* pvi_cmd = app.add_subcommand("pvi", "Painleve VI monodromy manifold checks");
    pvi_cmd->add_option("--theta", pvi_in.theta, "theta1..theta4, comma separated (complex as x+yi)");
    pvi_cmd->add_option("--kappa", pvi_in.kappa, "kappa1..kappa4");
    pvi_cmd->add_option("--a", pvi_in.a, "a1,a2,a3,a_inf");
    pvi_cmd->add_option("--point", pvi_in.point, "x1,x2 (x3 solved)");
    pvi_cmd->add_option("--samples", pvi_in.samples, "Random points when --point is absent");
    pvi_cmd->add_option("--seed", pvi_in.seed, "Random seed");
    pvi_cmd->add_option("--check", pvi_in.check, "relations or orbit");
    pvi_cmd->add_option("--depth", pvi_in.depth, "Orbit depth in mutation pairs");

    FormInput dot_in;
    int dot_depth = 2;
    auto* dot_cmd = app.add_subcommand("dot", "Graphviz topograph around a form");
    dot_cmd->add_option("--form", dot_in.form, "Coefficients a,b,c");
    dot_cmd->add_option("--cluster", dot_in.cluster, "Cluster w:n:e");
    dot_cmd->add_option("--depth", dot_depth, "Number of mutation levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*dot_cmd) {
            std::cout << run_dot(dot_in, dot_depth);
            return 0;
        }
        json doc;
        int code = 0;
        if (*reduce_cmd) {
            doc = run_reduce(reduce_in, max_steps);
        } else if (*equiv_cmd) {
            doc = run_equiv(equiv_a, equiv_b, strict);
        } else if (*markov_cmd) {
            doc = run_markov(markov_depth, markov_start);
        } else if (*laurent_cmd) {
            LaurentOutcome o = run_laurent(laurent_params, laurent_sequence, laurent_at);
            doc = o.doc;
            if (o.failed) {
                std::cerr << "error: " << doc["failure"]["error"].get<std::string>() << ": "
                          << doc["failure"]["message"].get<std::string>() << "\n";
                code = 1;
            }
        } else if (*snake_cmd) {
            doc = run_snake(snake_word, snake_fraction);
        } else if (*pvi_cmd) {
            doc = run_pvi(pvi_in);
        }
        std::cout << doc.dump(2) << "\n";
        return code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const TopographyError& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
        std::cout << json{{"error", {{"name", e.name()}, {"message", e.what()}}}}.dump(2) << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << json{{"error", {{"name", "InvalidArgument"}, {"message", e.what()}}}}.dump(2) << "\n";
        return 1;
    }
}

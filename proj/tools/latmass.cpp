// latmass CLI: exact counting of quadratic congruence solutions, certified
// mass / class-number lower bounds, conductor tables, and the property grid.
//
// Exit codes: 0 success, 1 property violation (method disagreement or grid
// counterexample), 2 invalid input.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "latmass/conductor.hpp"
#include "latmass/gridcheck.hpp"

using nlohmann::json;
using namespace latmass;

namespace {

enum class Format { JSON, CSV, TEXT };

struct JobSpec {
    std::string command;
    std::vector<Int> form;
    std::vector<Int> u;
    std::vector<Int> x;  // structure: the vector under study
    std::vector<Int> y;  // structure: optional comparison vector
    Int c = 1;
    Int p = 3;
    unsigned long k = 1;
    unsigned long r = 0;
    std::vector<std::size_t> S;
    long pivot = -1;
    std::vector<std::string> methods{"oracle", "convolution"};
    std::string delta = "1/2";
    std::string width = "1/10000";
    std::string c_lo = "auto";
    std::string mass_of_l;
    unsigned long precision = 0;
    unsigned long long max_pk = 0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    Format format = Format::TEXT;
    std::string out;
};

unsigned long long oracle_ceiling() {
    if (const char* env = std::getenv("LATMASS_CEILING")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) throw InvalidInput("LATMASS_CEILING must be a positive integer");
        return v;
    }
    return kOracleCeiling;
}

// ---- serialization helpers -------------------------------------------------

json rat_json(const Rat& q) {
    // The num/den strings are authoritative; approx is for human readers.
    return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}, {"approx", to_double(q)}};
}

json interval_json(const RationalInterval& iv) {
    return {{"lo", rat_json(iv.lo)}, {"hi", rat_json(iv.hi)}};
}

json ints_json(const std::vector<Int>& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(x.get_str());
    return a;
}

std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << q << " (~" << to_double(q) << ")";
    return os.str();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

// Flattens a record into deterministic key,value CSV rows.
void csv_flatten(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            csv_flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) csv_flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << csv_escape(prefix) << ",";
        if (j.is_string())
            os << csv_escape(j.get<std::string>());
        else
            os << j.dump();
        os << "\n";
    }
}

void emit(const JobSpec& job, const json& record, const std::string& text) {
    std::ostringstream buf;
    switch (job.format) {
        case Format::JSON: buf << record.dump(2) << "\n"; break;
        case Format::CSV:
            if (record.contains("rows") && record["rows"].is_array() && !record["rows"].empty() &&
                record["rows"][0].is_object()) {
                // Tabular records get a real CSV table.
                const json& rows = record["rows"];
                bool first = true;
                for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
                    buf << (first ? "" : ",") << csv_escape(it.key());
                    first = false;
                }
                buf << "\n";
                for (const json& row : rows) {
                    first = true;
                    for (auto it = row.begin(); it != row.end(); ++it) {
                        buf << (first ? "" : ",");
                        if (it.value().is_string())
                            buf << csv_escape(it.value().get<std::string>());
                        else
                            buf << it.value().dump();
                        first = false;
                    }
                    buf << "\n";
                }
            } else {
                buf << "key,value\n";
                csv_flatten(record, "", buf);
            }
            break;
        case Format::TEXT: buf << text; break;
    }
    if (job.out.empty()) {
        std::cout << buf.str();
    } else {
        std::ofstream f(job.out);
        if (!f) throw InvalidInput("cannot open output file " + job.out);
        f << buf.str();
    }
}

// ---- subcommand runners ----------------------------------------------------

int run_count(const JobSpec& job) {
    // CLI indices are 1-based, matching the coordinate labels x_1,..,x_l;
    // the library uses 0-based indices internally.
    std::set<std::size_t> S;
    for (std::size_t s : job.S) {
        if (s < 1) throw InvalidInput("S indices are 1-based");
        S.insert(s - 1);
    }
    long pivot0 = -1;
    if (job.pivot == 0) throw InvalidInput("pivot index is 1-based");
    if (job.pivot > 0) {
        pivot0 = job.pivot - 1;
        S.insert(static_cast<std::size_t>(pivot0));
    }
    CountQuery q{DiagonalForm(job.form), job.u, S, job.r, job.p, job.k};

    json records = json::array();
    std::ostringstream text;
    std::vector<Int> counts;
    for (const std::string& m : job.methods) {
        CountResult res{Int(0), CountMethod::ORACLE, std::nullopt};
        if (m == "oracle") {
            res = count_oracle(q, oracle_ceiling());
        } else if (m == "convolution") {
            res = count_convolution(q);
        } else if (m == "closed-form") {
            std::size_t pivot;
            if (pivot0 >= 0) {
                pivot = static_cast<std::size_t>(pivot0);
            } else if (S.size() == 1) {
                pivot = *S.begin();
            } else {
                throw InvalidInput("closed-form needs --pivot (or a singleton --S)");
            }
            res = closed_form_pivot_count(q, pivot);
        } else {
            throw InvalidInput("unknown method '" + m + "' (oracle|convolution|closed-form)");
        }
        counts.push_back(res.count);
        json rec = {{"method", m}, {"count", res.count.get_str()}};
        if (res.pivot) rec["pivot"] = *res.pivot + 1;  // 1-based on the wire
        records.push_back(rec);
        text << m << ": " << res.count;
        if (res.pivot) text << " (pivot " << *res.pivot + 1 << ")";
        text << "\n";
    }
    const bool agree = std::all_of(counts.begin(), counts.end(), [&](const Int& c) { return c == counts.front(); });
    text << "agree: " << (agree ? "yes" : "NO") << "\n";

    json record = {{"command", "count"},
                   {"query",
                    {{"form", ints_json(job.form)},
                     {"u", ints_json(job.u)},
                     {"S", [&] {
                          json a = json::array();
                          for (std::size_t s : S) a.push_back(s + 1);  // 1-based on the wire
                          return a;
                      }()},
                     {"r", job.r},
                     {"p", job.p.get_str()},
                     {"k", job.k}}},
                   {"records", records},
                   {"agree", agree}};
    emit(job, record, text.str());
    return agree ? 0 : 1;
}

int run_mass_bound(const JobSpec& job) {
    ShiftedLatticeSpec spec{DiagonalForm(job.form), job.u, job.c};
    const auto cls = classify_primes(spec);

    json record = {{"command", "mass-bound"},
                   {"form", ints_json(job.form)},
                   {"u", ints_json(job.u)},
                   {"c", job.c.get_str()},
                   {"omega1", ints_json({cls.omega1.begin(), cls.omega1.end()})},
                   {"omega2", ints_json({cls.omega2.begin(), cls.omega2.end()})}};
    std::ostringstream text;
    text << "conductor c = " << job.c << "\n";

    auto report = [&](const char* name, MassBoundMode mode) {
        const MassBoundResult res = mass_ratio_lower_bound(spec, mode);
        json factors = json::array();
        text << name << ":\n";
        for (const auto& [p, f] : res.factors) {
            factors.push_back({{"p", p.get_str()}, {"factor", rat_json(f)}});
            text << "  p = " << p << ": factor " << rat_str(f) << "\n";
        }
        record[name] = {{"factors", factors}, {"total", rat_json(res.total)}};
        text << "  total " << rat_str(res.total) << "\n";
        return res.total;
    };
    const Rat general = report("general", MassBoundMode::GENERAL);
    const Rat diagonal = report("diagonal", MassBoundMode::DIAGONAL_CLOSED_FORM);
    record["general_ge_diagonal"] = general >= diagonal;

    if (!job.mass_of_l.empty()) {
        const Rat mass = parse_rational(job.mass_of_l);
        const Rat delta = parse_rational(job.delta);
        const CDeltaResult cd = c_delta(delta, parse_rational(job.width));
        const RationalInterval hb = class_number_lower_bound(spec, mass, delta, cd.value);
        record["class_bound"] = interval_json(hb);
        text << "class-number lower bound >= " << rat_str(hb.lo) << "\n";
    }
    emit(job, record, text.str());
    return general >= diagonal ? 0 : 1;
}

int run_class_bound(const JobSpec& job) {
    if (job.mass_of_l.empty()) throw InvalidInput("class-bound requires --mass-of-L");
    ShiftedLatticeSpec spec{DiagonalForm(job.form), job.u, job.c};
    const Rat mass = parse_rational(job.mass_of_l);
    const Rat delta = parse_rational(job.delta);
    const CDeltaResult cd = c_delta(delta, parse_rational(job.width));
    const RationalInterval hb = class_number_lower_bound(spec, mass, delta, cd.value);

    json record = {{"command", "class-bound"},
                   {"form", ints_json(job.form)},
                   {"u", ints_json(job.u)},
                   {"c", job.c.get_str()},
                   {"delta", rat_json(delta)},
                   {"mass_of_L", rat_json(mass)},
                   {"c_delta", interval_json(cd.value)},
                   {"class_bound", interval_json(hb)}};
    std::ostringstream text;
    text << "h >= " << rat_str(hb.lo) << "\n";
    emit(job, record, text.str());
    return 0;
}

int run_table1(const JobSpec& job) {
    const Rat delta = parse_rational(job.delta);
    Rat c_lo;
    if (job.c_lo == "auto")
        c_lo = c_delta(delta, Rat(1, 1000000)).value.lo;
    else
        c_lo = parse_rational(job.c_lo);

    json rows = json::array();
    std::ostringstream text;
    text << "rank  c_max\n";
    for (const auto& [ell, cmax] : table1(delta, c_lo)) {
        rows.push_back({{"rank", ell}, {"c_max", cmax.get_str()}});
        text << ell << (ell < 10 ? "     " : "    ") << cmax << "\n";
    }
    json record = {{"command", "table1"}, {"delta", rat_json(delta)}, {"c_lo", rat_json(c_lo)}, {"rows", rows}};
    emit(job, record, text.str());
    return 0;
}

int run_cdelta(const JobSpec& job) {
    const Rat delta = parse_rational(job.delta);
    const Rat width = parse_rational(job.width);
    const CDeltaResult cd = c_delta(delta, width);
    json record = {{"command", "cdelta"},
                   {"delta", rat_json(delta)},
                   {"width", rat_json(width)},
                   {"value", interval_json(cd.value)},
                   {"primes", ints_json(cd.factor_primes)}};
    std::ostringstream text;
    text << "C_delta in [" << cd.value.lo << ", " << cd.value.hi << "]"
         << " (~" << to_double(cd.value.lo) << ")\nprimes:";
    for (const Int& p : cd.factor_primes) text << " " << p;
    text << "\n";
    emit(job, record, text.str());
    return 0;
}

int run_structure(const JobSpec& job) {
    LocalContext ctx = LocalContext::make(DiagonalForm(job.form), job.p);
    const unsigned long prec = job.precision ? job.precision : default_precision(ctx, 3);
    LocalVector x = make_local_vector(ctx, job.x, prec);
    if (x.is_zero()) throw InvalidInput("structure vector reduces to zero at this precision");

    json record = {{"command", "structure"},
                   {"form", ints_json(job.form)},
                   {"p", job.p.get_str()},
                   {"x", ints_json(x.coords)},
                   {"precision", prec}};
    std::ostringstream text;

    const Valuation v = order(ctx, x);
    record["order"] = v.value();
    text << "order v(L;x) = " << v.value() << "\n";

    const auto crit = critical_indices(ctx, x);
    record["critical_indices"] = json(crit);
    text << "critical indices:";
    for (unsigned long r : crit) text << " " << r;
    text << "\n";

    const auto simple = is_simple(ctx, x);
    record["simple_index"] = simple ? json(*simple) : json(nullptr);
    text << "simple: " << (simple ? "yes, index " + std::to_string(*simple) : "no") << "\n";

    if (x.is_primitive(ctx.p)) {
        record["depth"] = depth(ctx, x);
        text << "depth = " << depth(ctx, x) << "\n";
        json summands = json::array();
        text << "decomposition:\n";
        for (const JamesSummand& s : james_decompose(ctx, x)) {
            summands.push_back({{"power", s.power}, {"index", s.index}, {"vector", ints_json(s.vector.coords)}});
            text << "  p^" << s.power << " * lambda (index " << s.index << "): (";
            for (std::size_t j = 0; j < s.vector.coords.size(); ++j)
                text << (j ? "," : "") << s.vector.coords[j];
            text << ")\n";
        }
        record["james"] = summands;
    }

    if (!job.y.empty()) {
        LocalVector y = make_local_vector(ctx, job.y, prec);
        const AssocResult a = are_associated(ctx, x, y);
        const char* s = a == AssocResult::YES ? "yes" : a == AssocResult::NO ? "no" : "unknown";
        record["associated"] = s;
        text << "associated to y: " << s << "\n";
    }
    emit(job, record, text.str());
    return 0;
}

int run_verify(const JobSpec& job) {
    GridOptions opt;
    opt.oracle_ceiling = oracle_ceiling();
    opt.max_pk = job.max_pk;
    opt.jobs = job.jobs;
    const VerifySummary s = run_verify(opt);

    json checks = json::object();
    std::ostringstream text;
    text << "grid cells: " << s.cells << "\n";
    for (const auto& [name, n] : s.checks) {
        checks[name] = n;
        text << "  " << name << ": " << n << " checks\n";
    }
    text << "C_p branches seen: " << s.cp_branches_seen.size() << "/7\n";
    text << "tight bound cell seen: " << (s.tight_bound_seen ? "yes" : "no") << "\n";
    json record = {{"command", "verify"},
                   {"cells", s.cells},
                   {"checks", checks},
                   {"cp_branches", json(std::vector<int>(s.cp_branches_seen.begin(), s.cp_branches_seen.end()))},
                   {"tight_bound_seen", s.tight_bound_seen},
                   {"violations", json(s.violations)},
                   {"ok", s.ok()}};
    if (!s.ok()) {
        text << "VIOLATIONS:\n";
        for (const auto& v : s.violations) text << "  " << v << "\n";
    }
    text << (s.ok() ? "all properties hold\n" : "property violations found\n");
    emit(job, record, text.str());
    return s.ok() ? 0 : 1;
}

// ---- argument plumbing -----------------------------------------------------

std::vector<Int> parse_int_list(const std::string& s) {
    std::vector<Int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw InvalidInput("empty entry in integer list '" + s + "'");
        try {
            out.emplace_back(tok);
        } catch (const std::invalid_argument&) {
            throw InvalidInput("bad integer '" + tok + "'");
        }
    }
    if (out.empty()) throw InvalidInput("empty integer list");
    return out;
}

Int json_int(const json& j) {
    if (j.is_number_integer()) return Int(j.get<long>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw InvalidInput("expected integer or integer string in job file");
}

std::vector<Int> json_ints(const json& j) {
    std::vector<Int> out;
    for (const json& e : j) out.push_back(json_int(e));
    return out;
}

// Loads a JobSpec from a JSON job file; the "command" field picks the
// subcommand, all other fields mirror the flags.
JobSpec load_job(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open job file " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("job file is not valid JSON");
    JobSpec job;
    if (!j.contains("command") || !j["command"].is_string()) throw InvalidInput("job file needs a \"command\" string");
    job.command = j["command"].get<std::string>();
    if (j.contains("form")) job.form = json_ints(j["form"]);
    if (j.contains("u")) job.u = json_ints(j["u"]);
    if (j.contains("x")) job.x = json_ints(j["x"]);
    if (j.contains("y")) job.y = json_ints(j["y"]);
    if (j.contains("c")) job.c = json_int(j["c"]);
    if (j.contains("p")) job.p = json_int(j["p"]);
    if (j.contains("k")) job.k = j["k"].get<unsigned long>();
    if (j.contains("r")) job.r = j["r"].get<unsigned long>();
    if (j.contains("S")) job.S = j["S"].get<std::vector<std::size_t>>();
    if (j.contains("pivot")) job.pivot = j["pivot"].get<long>();
    if (j.contains("methods")) job.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("delta")) job.delta = j["delta"].get<std::string>();
    if (j.contains("width")) job.width = j["width"].get<std::string>();
    if (j.contains("c_lo")) job.c_lo = j["c_lo"].get<std::string>();
    if (j.contains("mass_of_L")) job.mass_of_l = j["mass_of_L"].get<std::string>();
    if (j.contains("precision")) job.precision = j["precision"].get<unsigned long>();
    if (j.contains("max_pk")) job.max_pk = j["max_pk"].get<unsigned long long>();
    if (j.contains("jobs")) job.jobs = j["jobs"].get<unsigned>();
    if (j.contains("format")) {
        const std::string f = j["format"].get<std::string>();
        if (f == "json")
            job.format = Format::JSON;
        else if (f == "csv")
            job.format = Format::CSV;
        else if (f == "text")
            job.format = Format::TEXT;
        else
            throw InvalidInput("unknown format '" + f + "'");
    }
    if (j.contains("out")) job.out = j["out"].get<std::string>();
    return job;
}

int dispatch(const JobSpec& job) {
    if (job.command == "count") return run_count(job);
    if (job.command == "mass-bound") return run_mass_bound(job);
    if (job.command == "class-bound") return run_class_bound(job);
    if (job.command == "table1") return run_table1(job);
    if (job.command == "cdelta") return run_cdelta(job);
    if (job.command == "structure") return run_structure(job);
    if (job.command == "verify") return run_verify(job);
    throw InvalidInput("unknown command '" + job.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shifted quadratic lattices: exact congruence counts and certified bounds"};
    app.require_subcommand(0, 1);

    JobSpec job;
    std::string job_file, form_s, u_s, x_s, y_s, s_s, c_s = "1", p_s = "3";
    std::map<std::string, Format> fmap{{"json", Format::JSON}, {"csv", Format::CSV}, {"text", Format::TEXT}};

    app.add_option("--job", job_file, "JSON job file (provides command and parameters)");
    app.add_option("--out", job.out, "write output to FILE instead of stdout");
    app.add_option("--format", job.format, "output format")
        ->transform(CLI::CheckedTransformer(fmap, CLI::ignore_case));

    auto add_form_u = [&](CLI::App* c, bool need_u) {
        c->add_option("--form", form_s, "diagonal coefficients a_1,..,a_l")->required();
        auto* o = c->add_option("--u", u_s, "shift vector u_1,..,u_l");
        if (need_u) o->required();
    };

    CLI::App* count = app.add_subcommand("count", "count congruence solutions by several methods");
    add_form_u(count, true);
    count->add_option("--p", p_s, "odd prime")->required();
    count->add_option("--k", job.k, "prime-power exponent")->required();
    count->add_option("--r", job.r, "congruence depth (x = u mod p^r)");
    count->add_option("--S", s_s, "unit-coordinate indices, 0-based");
    count->add_option("--pivot", job.pivot, "pivot index (implies S = {pivot})");
    count->add_option("--methods", job.methods, "oracle,convolution,closed-form")->delimiter(',');

    CLI::App* mass = app.add_subcommand("mass-bound", "certified mass-ratio lower bound");
    add_form_u(mass, true);
    mass->add_option("--c", c_s, "odd conductor")->required();
    mass->add_option("--mass-of-L", job.mass_of_l, "Siegel mass of L (rational), enables the class bound");
    mass->add_option("--delta", job.delta, "exponent delta (rational)");
    mass->add_option("--width", job.width, "C_delta interval width");

    CLI::App* cls = app.add_subcommand("class-bound", "certified class-number lower bound");
    add_form_u(cls, true);
    cls->add_option("--c", c_s, "odd conductor")->required();
    cls->add_option("--mass-of-L", job.mass_of_l, "Siegel mass of L (rational)")->required();
    cls->add_option("--delta", job.delta, "exponent delta (rational)");
    cls->add_option("--width", job.width, "C_delta interval width");

    CLI::App* t1 = app.add_subcommand("table1", "max odd conductor per rank 3..10");
    t1->add_option("--delta", job.delta, "exponent delta (rational)");
    t1->add_option("--c-lo", job.c_lo, "C_delta lower bound (rational, or 'auto')");

    CLI::App* cd = app.add_subcommand("cdelta", "certified enclosure of C_delta");
    cd->add_option("--delta", job.delta, "exponent delta (rational)");
    cd->add_option("--width", job.width, "interval width");

    CLI::App* st = app.add_subcommand("structure", "p-adic structure of a vector");
    add_form_u(st, false);
    st->add_option("--p", p_s, "odd prime")->required();
    st->add_option("--x", x_s, "vector under study")->required();
    st->add_option("--y", y_s, "second vector for the associateness test");
    st->add_option("--precision", job.precision, "working precision K (digits base p)");

    CLI::App* vf = app.add_subcommand("verify", "run the full property grid");
    vf->add_option("--jobs", job.jobs, "worker threads");
    vf->add_option("--max-pk", job.max_pk, "skip cells with p^k above this");

    for (CLI::App* sub : {count, mass, cls, t1, cd, st, vf}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!job_file.empty()) {
            JobSpec filed = load_job(job_file);
            if (!job.out.empty()) filed.out = job.out;  // flags may redirect output
            return dispatch(filed);
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 2;
        }
        CLI::App* sub = app.get_subcommands().front();
        job.command = sub->get_name();
        if (!form_s.empty()) job.form = parse_int_list(form_s);
        if (!u_s.empty()) job.u = parse_int_list(u_s);
        if (!x_s.empty()) job.x = parse_int_list(x_s);
        if (!y_s.empty()) job.y = parse_int_list(y_s);
        if (!s_s.empty())
            for (const Int& i : parse_int_list(s_s)) job.S.push_back(i.get_ui());
        job.c = Int(c_s);
        job.p = Int(p_s);
        return dispatch(job);
    } catch (const Error& e) {
        json err = {{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
    }
}

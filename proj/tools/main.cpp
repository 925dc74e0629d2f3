// infoclust command line: exact finite models, compressor distances, cluster
// mining, referential filtering, core certification, and the verification
// suites, one subcommand each.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infoclust/cluster.hpp"
#include "infoclust/compress.hpp"
#include "infoclust/daisy.hpp"
#include "infoclust/matrix.hpp"
#include "infoclust/ncd.hpp"
#include "infoclust/referential.hpp"
#include "infoclust/set_model.hpp"
#include "infoclust/table_model.hpp"
#include "infoclust/triple.hpp"
#include "infoclust/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace infoclust;

namespace {

struct Options {
    std::string backend = "set";
    int universe = 5;
    std::string model_path;
    std::string items_path;
    std::string stream_path;
    std::string target_path;
    std::string registry_path;
    std::string matrix_path;
    std::string corpus_dir;
    std::string out_dir;
    std::string compressor = "builtin";
    std::string core;
    std::string x_set, y_set, z_set;
    double m = 0;
    std::int64_t l = 0;
    std::int64_t d = 0;
    std::int64_t dprime = -1;
    std::int64_t delta = -1;
    std::int64_t slack = 0;
    double m_bits = -1;
    std::uint64_t seed = 1;
    std::vector<std::string> suites;
    int claim_points = 10;
    int claim_events = 6;
    int pathlemma_systems = 1000;
    int multiplicity_runs = 500;
    int certify_runs = 200;
};

CompressorHandle parse_compressor(const std::string& text) {
    if (text == "builtin")
        return CompressorHandle::builtin();
    if (text.rfind("cmd:", 0) == 0)
        return CompressorHandle::external(text.substr(4));
    throw format_error("compressor must be 'builtin' or 'cmd:TEMPLATE'");
}

std::uint64_t parse_set_mask(const std::string& text, Universe u) {
    if (text.empty() || text == "none" || text == "-")
        return 0;
    std::uint64_t mask = 0;
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t end = text.find(',', at);
        if (end == std::string::npos)
            end = text.size();
        int pos = std::stoi(text.substr(at, end - at));
        if (pos < 0 || pos >= u.size())
            throw format_error("position " + std::to_string(pos) + " outside universe");
        mask |= std::uint64_t{1} << pos;
        at = end + 1;
    }
    return mask;
}

void write_text(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw format_error("cannot write " + path.string());
    out << body;
}

void emit(const Options& opt, const std::string& filename, const ordered_json& j) {
    std::string body = j.dump(2) + "\n";
    if (opt.out_dir.empty()) {
        std::fputs(body.c_str(), stdout);
    } else {
        fs::create_directories(opt.out_dir);
        write_text(fs::path(opt.out_dir) / filename, body);
    }
}

std::vector<std::vector<std::size_t>> load_stream(const std::string& path,
                                                  const DistanceMatrix& mat) {
    std::ifstream in(path);
    if (!in)
        throw format_error("cannot open stream file: " + path);
    std::vector<std::vector<std::size_t>> stream;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw format_error("bad stream line: " + std::string(e.what()));
        }
        std::vector<std::size_t> members;
        for (const auto& id : j.at("members"))
            members.push_back(mat.index_of(id.get<std::string>()));
        stream.push_back(std::move(members));
    }
    return stream;
}

std::vector<std::size_t> load_member_set(const std::string& path, const DistanceMatrix& mat) {
    std::ifstream in(path);
    if (!in)
        throw format_error("cannot open cluster file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error("bad cluster JSON: " + std::string(e.what()));
    }
    std::vector<std::size_t> members;
    for (const auto& id : j.at("members"))
        members.push_back(mat.index_of(id.get<std::string>()));
    return members;
}

// Backend plumbing shared by matrix/clusters/referential/certify: build the
// matrix (and keep the table system when one was loaded).
struct BackendContext {
    DistanceMatrix matrix;
    std::optional<DescriptionSystem> system;
};

BackendContext build_matrix(const Options& opt) {
    BackendContext ctx;
    if (opt.backend == "set") {
        Universe u(opt.universe);
        if (opt.items_path.empty()) {
            SetModel model(u);
            ctx.matrix = distance_matrix(model);
        } else {
            std::ifstream in(opt.items_path);
            if (!in)
                throw format_error("cannot open items file: " + opt.items_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw format_error("bad items JSON: " + std::string(e.what()));
            }
            std::vector<std::uint64_t> masks;
            for (const auto& positions : j) {
                std::uint64_t mask = 0;
                for (const auto& p : positions) {
                    int pos = p.get<int>();
                    if (pos < 0 || pos >= u.size())
                        throw format_error("item position outside universe");
                    mask |= std::uint64_t{1} << pos;
                }
                masks.push_back(mask);
            }
            ctx.matrix = distance_matrix_sets(u, masks);
        }
    } else if (opt.backend == "table") {
        if (opt.model_path.empty())
            throw format_error("table backend needs --model FILE");
        ctx.system = DescriptionSystem::load(opt.model_path);
        ctx.matrix = distance_matrix(TableModel(*ctx.system));
    } else if (opt.backend == "ncd") {
        if (opt.corpus_dir.empty())
            throw format_error("ncd backend needs --in DIR");
        auto items = load_corpus(opt.corpus_dir);
        ctx.matrix = ncd_matrix(items, parse_compressor(opt.compressor));
    } else {
        throw format_error("unknown backend: " + opt.backend);
    }
    return ctx;
}

int cmd_verify(const Options& opt) {
    static const std::vector<std::string> known{"chain",       "pathlemma", "claim",
                                               "multiplicity", "certify",   "nonshannon",
                                               "triplecore",   "daisy",     "registry"};
    for (const std::string& s : opt.suites) {
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw format_error("unknown suite: " + s);
        if (s == "registry" && opt.registry_path.empty())
            throw format_error("the registry suite needs --registry FILE");
    }
    VerifyOptions vopt;
    vopt.seed = opt.seed;
    vopt.suites = opt.suites;
    vopt.claim_points = opt.claim_points;
    vopt.claim_events = opt.claim_events;
    vopt.pathlemma_systems = opt.pathlemma_systems;
    vopt.multiplicity_runs = opt.multiplicity_runs;
    vopt.certify_runs = opt.certify_runs;
    vopt.registry_path = opt.registry_path;
    auto report = run_verify_suite(vopt);
    for (const SuiteResult& s : report.suites)
        std::printf("[%s] %-12s %10llu instances %10.1f ms\n", s.pass ? "PASS" : "FAIL",
                    s.name.c_str(), static_cast<unsigned long long>(s.instances), s.wall_ms);
    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        write_text(fs::path(opt.out_dir) / "verify_report.json", report.to_json().dump(2) + "\n");
    } else if (!report.pass()) {
        std::fputs((report.to_json().dump(2) + "\n").c_str(), stdout);
    }
    return report.pass() ? 0 : 1;
}

int cmd_matrix(const Options& opt) {
    auto ctx = build_matrix(opt);
    if (opt.out_dir.empty()) {
        write_matrix_csv(ctx.matrix, std::cout);
    } else {
        fs::create_directories(opt.out_dir);
        save_matrix_csv(ctx.matrix, (fs::path(opt.out_dir) / "matrix.csv").string());
    }
    return 0;
}

int cmd_clusters(const Options& opt) {
    DistanceMatrix mat;
    bool built_fresh = false;
    if (!opt.matrix_path.empty()) {
        mat = load_matrix_csv(opt.matrix_path,
                              opt.backend == "ncd" ? DistanceUnits::ncd : DistanceUnits::bits);
    } else {
        mat = build_matrix(opt).matrix;
        built_fresh = true;
    }
    double threshold = opt.m;
    if (opt.m_bits >= 0) {
        if (mat.bit_scale() <= 0)
            throw format_error("--m-bits needs a matrix with a bit scale");
        threshold = opt.m_bits / mat.bit_scale();
    }
    auto clusters = mine_clusters(mat, threshold, opt.l);
    auto j = clusters_json(clusters, mat, threshold, opt.l);
    if (opt.out_dir.empty()) {
        std::fputs((j.dump(2) + "\n").c_str(), stdout);
    } else {
        fs::create_directories(opt.out_dir);
        if (built_fresh)
            save_matrix_csv(mat, (fs::path(opt.out_dir) / "matrix.csv").string());
        write_text(fs::path(opt.out_dir) / "clusters.json", j.dump(2) + "\n");
        write_text(fs::path(opt.out_dir) / "tree.dot", dendrogram_dot(mat));
    }
    return 0;
}

int cmd_daisy(const Options& opt) {
    ordered_json j;
    bool pass = false;
    if (opt.backend == "set") {
        Universe u(opt.universe);
        SetModel model(u);
        std::size_t core = parse_set_mask(opt.core, u);
        DaisyParams params{core, static_cast<std::int64_t>(opt.m), opt.d};
        auto members = daisy_members(params, model);
        auto rep = daisy_cluster_check(params, model, opt.slack);
        j["core"] = model.label(core);
        j["m"] = params.m;
        j["d"] = params.d;
        j["members"] = ordered_json::array();
        for (std::size_t x : members)
            j["members"].push_back(model.label(x));
        j["diameter"] = rep.diameter.str();
        j["bound"] = rep.bound;
        j["pass"] = pass = rep.pass;
    } else if (opt.backend == "table") {
        if (opt.model_path.empty())
            throw format_error("table backend needs --model FILE");
        auto sys = DescriptionSystem::load(opt.model_path);
        TableModel model(sys);
        DaisyParams params{sys.index_of(opt.core), static_cast<std::int64_t>(opt.m), opt.d};
        auto members = daisy_members(params, model);
        auto rep = daisy_cluster_check(params, model, opt.slack);
        j["core"] = opt.core;
        j["m"] = params.m;
        j["d"] = params.d;
        j["members"] = ordered_json::array();
        for (std::size_t x : members)
            j["members"].push_back(model.label(x));
        j["diameter"] = rep.diameter.str();
        j["bound"] = rep.bound;
        j["pass"] = pass = rep.pass;
    } else {
        throw format_error("daisy supports the set and table backends");
    }
    emit(opt, "daisy.json", j);
    return pass ? 0 : 1;
}

int cmd_referential(const Options& opt) {
    auto ctx = build_matrix(opt);
    if (opt.stream_path.empty())
        throw format_error("referential needs --stream FILE");
    auto stream = load_stream(opt.stream_path, ctx.matrix);
    std::int64_t dprime = opt.dprime >= 0 ? opt.dprime : 2 * opt.d + 2;
    auto reg = referential_filter(stream, static_cast<std::int64_t>(opt.m), opt.d, dprime,
                                  ctx.matrix);
    emit(opt, "registry.json", registry_json(reg, ctx.matrix));
    return 0;
}

int cmd_certify(const Options& opt) {
    auto ctx = build_matrix(opt);
    if (opt.stream_path.empty() || opt.target_path.empty())
        throw format_error("certify needs --stream FILE and --target FILE");
    auto stream = load_stream(opt.stream_path, ctx.matrix);
    auto target = load_member_set(opt.target_path, ctx.matrix);
    std::int64_t dprime = opt.dprime >= 0 ? opt.dprime : 2 * opt.d + 2;
    auto reg = referential_filter(stream, static_cast<std::int64_t>(opt.m), opt.d, dprime,
                                  ctx.matrix);
    auto cert = certify_core(target, reg, ctx.matrix);
    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        write_text(fs::path(opt.out_dir) / "registry.json",
                   registry_json(reg, ctx.matrix).dump(2) + "\n");
    }
    emit(opt, "certificate.json", certificate_json(cert, ctx.matrix));
    return 0;
}

int cmd_triple(const Options& opt) {
    Universe u(opt.universe);
    SetString x(u, parse_set_mask(opt.x_set, u));
    SetString y(u, parse_set_mask(opt.y_set, u));
    SetString z(u, parse_set_mask(opt.z_set, u));
    auto rep = extract_triple_core(x, y, z);
    ordered_json j;
    j["eps"] = rep.eps;
    j["triple_info"] = rep.triple_info;
    j["w"] = rep.core->members();
    j["residuals"] = rep.residuals;
    j["profile"] = rep.prof.as_array();
    if (opt.delta >= 0) {
        auto cc = clone_cluster_check(x, y, z, opt.delta);
        ordered_json c;
        c["delta"] = cc.delta;
        c["member_count"] = cc.member_count;
        c["diameter"] = cc.diameter;
        c["logsize"] = cc.logsize;
        c["diameter_bound"] = cc.diameter_bound;
        c["logsize_reference"] = cc.logsize_reference;
        c["pass"] = cc.pass;
        j["clones"] = c;
    }
    emit(opt, "triple.json", j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"information-distance clusters: exact finite models and compressor proxies"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--backend", opt.backend, "set | table | ncd");
        cmd->add_option("--universe", opt.universe, "set-model universe size (1..64)");
        cmd->add_option("--model", opt.model_path, "description system JSON");
        cmd->add_option("--items", opt.items_path, "set items JSON (array of position arrays)");
        cmd->add_option("--in", opt.corpus_dir, "corpus directory (ncd backend)");
        cmd->add_option("--compressor", opt.compressor, "builtin | cmd:TEMPLATE with {in},{out}");
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--seed", opt.seed, "seed for randomized suites (default 1)");
    };

    auto* verify = app.add_subcommand("verify", "run the verification suites");
    add_common(verify);
    verify->add_option("--suite", opt.suites,
                       "suites to run (chain pathlemma claim multiplicity certify nonshannon "
                       "triplecore daisy registry); default all");
    verify->add_option("--registry", opt.registry_path, "registry JSON to re-validate");
    verify->add_option("--exhaustive-points", opt.claim_points, "claim search point budget");
    verify->add_option("--exhaustive-events", opt.claim_events, "claim search event budget");
    verify->add_option("--pathlemma-systems", opt.pathlemma_systems, "random systems to sweep");
    verify->add_option("--multiplicity-runs", opt.multiplicity_runs, "filter runs to sweep");
    verify->add_option("--certify-runs", opt.certify_runs, "certification instances");

    auto* matrix = app.add_subcommand("matrix", "build a distance matrix (matrix.csv)");
    add_common(matrix);

    auto* clusters = app.add_subcommand(
        "clusters", "mine maximal clusters (clusters.json, tree.dot; matrix.csv when built)");
    add_common(clusters);
    clusters->add_option("--matrix", opt.matrix_path, "existing matrix.csv to mine");
    clusters->add_option("--m", opt.m, "diameter threshold, matrix units");
    clusters->add_option("--m-bits", opt.m_bits, "diameter threshold in bits (uses bit scale)");
    clusters->add_option("--l", opt.l, "logsize threshold");

    auto* daisy = app.add_subcommand("daisy", "daisy membership and diameter check");
    add_common(daisy);
    daisy->add_option("--core", opt.core, "core: positions '0,2' (set) or string id (table)");
    daisy->add_option("--m", opt.m, "daisy m");
    daisy->add_option("--d", opt.d, "daisy d");
    daisy->add_option("--slack", opt.slack, "declared triangle slack (table models)");

    auto* referential =
        app.add_subcommand("referential", "filter a cluster stream (registry.json)");
    add_common(referential);
    referential->add_option("--stream", opt.stream_path, "JSON-lines cluster stream");
    referential->add_option("--m", opt.m, "cluster diameter bound");
    referential->add_option("--d", opt.d, "cluster logsize deficit");
    referential->add_option("--dprime", opt.dprime, "large-intersection exponent (default 2d+2)");

    auto* certify = app.add_subcommand("certify", "certify a cluster core (certificate.json)");
    add_common(certify);
    certify->add_option("--stream", opt.stream_path, "JSON-lines cluster stream");
    certify->add_option("--target", opt.target_path, "target cluster JSON {\"members\":[...]}");
    certify->add_option("--m", opt.m, "cluster diameter bound");
    certify->add_option("--d", opt.d, "cluster logsize deficit");
    certify->add_option("--dprime", opt.dprime, "large-intersection exponent (default 2d+2)");

    auto* triple = app.add_subcommand("triple", "triple information report (triple.json)");
    add_common(triple);
    triple->add_option("--x", opt.x_set, "positions of x, e.g. '0,1' ('-' for empty)");
    triple->add_option("--y", opt.y_set, "positions of y");
    triple->add_option("--z", opt.z_set, "positions of z");
    triple->add_option("--delta", opt.delta, "also measure the delta-clone set");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits clean, usage errors exit 2
    }

    try {
        if (verify->parsed())
            return cmd_verify(opt);
        if (matrix->parsed())
            return cmd_matrix(opt);
        if (clusters->parsed())
            return cmd_clusters(opt);
        if (daisy->parsed())
            return cmd_daisy(opt);
        if (referential->parsed())
            return cmd_referential(opt);
        if (certify->parsed())
            return cmd_certify(opt);
        if (triple->parsed())
            return cmd_triple(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

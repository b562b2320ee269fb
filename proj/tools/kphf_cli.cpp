// Command-line front end: key generation, build/verify of serialized
// functions, benchmarking with CSV output, and numeric curve tables.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kphf/bench.hpp"
#include "kphf/curves.hpp"
#include "kphf/keygen.hpp"
#include "kphf/phf.hpp"
#include "kphf/thresholds.hpp"

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    if (lines.empty()) throw std::runtime_error(path + " contains no keys");
    return lines;
}

std::vector<kphf::Key128> hash_lines(const std::vector<std::string>& lines) {
    std::vector<kphf::Key128> keys;
    keys.reserve(lines.size());
    for (const std::string& s : lines) keys.push_back(kphf::key_from_bytes(s));
    return keys;
}

std::unique_ptr<kphf::MkPhf> load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    kphf::Reader r(in);
    return kphf::load_phf(r);
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

void add_build_options(CLI::App* cmd, kphf::BuildOptions& opt) {
    cmd->add_option("--scheme", opt.scheme, "threshold | bucket | recsplit | pachash")
        ->default_val("threshold");
    cmd->add_option("-k,--k", opt.k, "bin capacity")->default_val(8);
    cmd->add_option("--gamma", opt.gamma, "threshold overload factor (e.g. 2, 1.2, 6/5)");
    cmd->add_option("-t,--thresholds", opt.t, "threshold count (0 = auto)");
    cmd->add_option("--variant", opt.variant, "plain | packed | consensus")->default_val("plain");
    cmd->add_option("--lambda", opt.lambda, "bucket scheme: mean bucket size (0 = auto)");
    cmd->add_option("--encoding", opt.encoding, "bucket scheme: rice | compact")
        ->default_val("rice");
    cmd->add_option("--ell", opt.ell, "recsplit: leaf fanout limit")->default_val(2);
    cmd->add_option("--bucket-size", opt.bucket_size, "recsplit: keys per bucket (0 = auto)");
    cmd->add_option("-a,--a", opt.a, "pachash: buckets per bin (0 = auto)");
    cmd->add_option("--seed", opt.seed, "build seed");
    cmd->add_option("--max-layers", opt.max_layers, "threshold: bumping layer cap")
        ->default_val(64);
}

int run(int argc, char** argv) {
    CLI::App app{"minimal k-perfect hash functions"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate distinct string keys");
    uint64_t gen_n = 1000, gen_seed = 1;
    std::string gen_out;
    gen->add_option("-n,--n", gen_n, "number of keys")->required();
    gen->add_option("--seed", gen_seed, "generator seed")->default_val(1);
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");

    auto* build = app.add_subcommand("build", "build a function from a key file");
    kphf::BuildOptions bopt;
    std::string build_in, build_out;
    add_build_options(build, bopt);
    build->add_option("-i,--keys", build_in, "key file, one key per line")->required();
    build->add_option("-o,--out", build_out, "output function file")->required();

    auto* verify = app.add_subcommand("verify", "check a function against a key file");
    std::string ver_in, ver_fn;
    uint64_t ver_k = 0;
    verify->add_option("-i,--keys", ver_in, "key file")->required();
    verify->add_option("-f,--fn", ver_fn, "function file")->required();
    verify->add_option("-k,--k", ver_k, "require this bin capacity");

    auto* bench = app.add_subcommand("bench", "measure space and speed, CSV output");
    kphf::BuildOptions qopt;
    std::string bench_in;
    uint64_t bench_queries = 10000000, bench_rounds = 3;
    bool bench_no_header = false;
    add_build_options(bench, qopt);
    bench->add_option("-i,--keys", bench_in, "key file")->required();
    bench->add_option("--queries", bench_queries, "member lookups to time")
        ->default_val(10000000);
    bench->add_option("--rounds", bench_rounds, "construction repetitions")->default_val(3);
    bench->add_flag("--no-header", bench_no_header, "omit the CSV header line");

    auto* curves = app.add_subcommand("curves", "numeric tables as CSV");
    uint64_t cur_k = 8, cur_grid = 4096;
    uint32_t cur_t = 0;
    std::string cur_gamma, cur_out;
    bool cur_thresholds = false, cur_asymptotic = false;
    curves->add_option("-k,--k", cur_k, "bin capacity")->required();
    curves->add_option("--grid", cur_grid, "table resolution")->default_val(4096);
    curves->add_flag("--thresholds", cur_thresholds, "emit optimal bumping thresholds");
    curves->add_flag("--asymptotic", cur_asymptotic, "emit asymptotic thresholds");
    curves->add_option("--gamma", cur_gamma, "overload factor for threshold tables");
    curves->add_option("-t,--t", cur_t, "threshold count for threshold tables");
    curves->add_option("-o,--out", cur_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (*gen) {
        std::ofstream file;
        std::ostream& out = open_out(file, gen_out);
        for (const std::string& s : kphf::gen_keys(gen_n, gen_seed)) out << s << '\n';
        out.flush();
        return 0;
    }

    if (*build) {
        auto keys = hash_lines(read_lines(build_in));
        std::unique_ptr<kphf::MkPhf> f = kphf::build_phf(keys, bopt);
        std::ofstream out(build_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + build_out);
        kphf::Writer w(out);
        f->save(w);
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + build_out);
        double bits = (double)kphf::serialized_bits(*f) / (double)f->num_keys();
        std::printf("built scheme=%s config=%s n=%llu k=%llu m=%llu bits_per_key=%.4f "
                    "overhead_pct=%.2f\n",
                    f->scheme_name(), f->describe().c_str(),
                    (unsigned long long)f->num_keys(), (unsigned long long)f->bin_capacity(),
                    (unsigned long long)f->num_bins(), bits,
                    100.0 * (bits / kphf::lower_bound_bits(f->bin_capacity()) - 1.0));
        return 0;
    }

    if (*verify) {
        auto keys = hash_lines(read_lines(ver_in));
        std::unique_ptr<kphf::MkPhf> f = load_file(ver_fn);
        if (ver_k != 0 && f->bin_capacity() != ver_k) {
            std::printf("FAIL: function has k=%llu, requested k=%llu\n",
                        (unsigned long long)f->bin_capacity(), (unsigned long long)ver_k);
            return 1;
        }
        kphf::VerifyResult v = kphf::verify_phf(*f, keys);
        if (!v.ok) {
            std::printf("FAIL: %s\n", v.error.c_str());
            return 1;
        }
        std::printf("OK scheme=%s config=%s n=%llu k=%llu m=%llu\n", f->scheme_name(),
                    f->describe().c_str(), (unsigned long long)f->num_keys(),
                    (unsigned long long)f->bin_capacity(), (unsigned long long)f->num_bins());
        return 0;
    }

    if (*bench) {
        auto keys = hash_lines(read_lines(bench_in));
        kphf::BenchResult r = kphf::run_bench(qopt, keys, bench_queries, bench_rounds);
        if (!bench_no_header) std::printf("%s\n", kphf::csv_header().c_str());
        std::printf("%s\n", kphf::csv_line(r).c_str());
        return 0;
    }

    if (*curves) {
        std::ofstream file;
        std::ostream& out = open_out(file, cur_out);
        if (cur_thresholds || cur_asymptotic) {
            kphf::Gamma g = cur_gamma.empty() ? kphf::default_gamma(cur_k)
                                              : kphf::parse_gamma(cur_gamma);
            uint32_t t = cur_t ? cur_t : kphf::default_t(cur_k);
            std::vector<double> T = cur_asymptotic
                                        ? kphf::asymptotic_thresholds(cur_k, g.value(), t)
                                        : kphf::optimal_thresholds(cur_k, g.value(), t);
            out << "i,threshold\n";
            char buf[64];
            for (size_t i = 0; i < T.size(); i++) {
                std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, T[i]);
                out << buf;
            }
            if (!cur_asymptotic) {
                double e = kphf::expected_empty_slots(cur_k, g.value(), T);
                std::fprintf(stderr, "expected empty slots per bin: %.6f (fraction %.6f)\n", e,
                             e / (double)cur_k);
            }
        } else {
            kphf::CurveTable c = kphf::bucket_curves(cur_k, cur_grid);
            out << "x,pk,beta\n";
            char buf[128];
            for (size_t i = 0; i < c.xs.size(); i++) {
                std::snprintf(buf, sizeof buf, "%.8f,%.10g,%.10f\n", c.xs[i], c.pk[i], c.beta[i]);
                out << buf;
            }
        }
        out.flush();
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "kphf: error: %s\n", e.what());
        return 1;
    }
}

// certify: factor matrices over exact rings into certified traceless /
// semi-traceless / commutator products, verify certificates, and run the
// exhaustive desk-scale oracles.
//
// exit codes: 0 success / verification PASS, 1 verification FAIL,
// 2 usage or input error

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "io.hpp"
#include "tracefactor/sampling.hpp"
#include "tracefactor/traceless.hpp"

namespace {

using tracefactor::io::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tracefactor::io::usage_error("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw tracefactor::parse_error(std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return doc;
}

// atomic write: temp file in the same directory, then rename
void write_json_atomic(const std::string& path, const json& doc) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw tracefactor::io::usage_error("cannot write '" + tmp + "'");
        out << doc.dump(2) << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw tracefactor::io::usage_error("cannot rename onto '" + path + "'");
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TRACEFACTOR_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            return 1;
        }
    }
    return 1;
}

template <typename R>
tracefactor::Matrix<R> sample_matrix(tracefactor::Sampler& s, std::size_t n, const R& model) {
    return s.template matrix<R>(n, n, model);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified traceless and semi-traceless matrix factorizations"};
    app.require_subcommand(1);

    auto* factor = app.add_subcommand("factor", "factor a matrix and write a certificate");
    std::string kind, in_path, out_path;
    std::uint64_t seed = default_seed();
    factor->add_option("--kind", kind, "factorization kind")
        ->required()
        ->check(CLI::IsMember({"traceless", "semitraceless", "2x2", "field", "finitary",
                               "commutators", "generalized", "sum2prod", "bruhat", "rcf"}));
    factor->add_option("--in", in_path, "input matrix document (JSON)")->required();
    factor->add_option("--out", out_path, "output certificate path")->required();
    factor->add_option("--seed", seed, "deterministic seed (default: TRACEFACTOR_SEED or 1)");

    auto* verify = app.add_subcommand("verify", "re-check every claim of a certificate");
    std::string cert_path;
    verify->add_option("--cert", cert_path, "certificate path")->required();

    auto* oracle = app.add_subcommand("oracle", "run an exhaustive finite-field suite");
    std::string suite;
    oracle->add_option("--suite", suite, "oracle suite")
        ->required()
        ->check(CLI::IsMember({"f2-two-traceless", "m2f2-commutator-image", "m2f3-two-traceless"}));

    auto* bench = app.add_subcommand("bench", "time the general factorization");
    std::string sizes_arg = "2,3,4", rings_arg = "Q,Qi,HQ";
    std::uint64_t bench_seed = default_seed();
    bench->add_option("--sizes", sizes_arg, "comma-separated sizes");
    bench->add_option("--rings", rings_arg, "comma-separated ring tags");
    bench->add_option("--seed", bench_seed, "deterministic seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (factor->parsed()) {
            auto input = tracefactor::io::parse_matrix(read_json_file(in_path));
            json cert = tracefactor::io::make_certificate(kind, input, seed);
            write_json_atomic(out_path, cert);
            auto report = tracefactor::io::verify_certificate(cert);
            std::cout << (report.pass ? "PASS" : "FAIL") << " " << kind;
            if (cert.contains("count")) std::cout << " count=" << cert["count"].dump();
            std::cout << " -> " << out_path << "\n";
            return report.pass ? 0 : 1;
        }
        if (verify->parsed()) {
            auto report = tracefactor::io::verify_certificate(read_json_file(cert_path));
            for (const auto& line : report.checks) std::cout << line << "\n";
            std::cout << (report.pass ? "PASS" : "FAIL") << " " << cert_path << "\n";
            return report.pass ? 0 : 1;
        }
        if (oracle->parsed()) {
            auto rep = tracefactor::io::run_oracle(suite);
            std::cout << (rep.pass ? "PASS " : "FAIL ") << suite << ": " << rep.summary << "\n";
            return rep.pass ? 0 : 1;
        }
        if (bench->parsed()) {
            std::vector<std::size_t> sizes;
            std::stringstream ss(sizes_arg);
            for (std::string tok; std::getline(ss, tok, ',');) sizes.push_back(std::stoul(tok));
            std::stringstream rs(rings_arg);
            for (std::string ring; std::getline(rs, ring, ',');) {
                for (std::size_t n : sizes) {
                    tracefactor::Sampler s(bench_seed);
                    auto t0 = std::chrono::steady_clock::now();
                    int reps = 20;
                    for (int r = 0; r < reps; ++r) {
                        if (ring == "Q") {
                            auto a = sample_matrix(s, n, tracefactor::Rational(0));
                            (void)tracefactor::factor_general(a);
                        } else if (ring == "Qi") {
                            auto a = sample_matrix(s, n, tracefactor::Gaussian());
                            (void)tracefactor::factor_general(a);
                        } else if (ring == "HQ") {
                            auto a = sample_matrix(s, n, tracefactor::QuaternionQ());
                            (void)tracefactor::factor_general(a);
                        } else {
                            throw tracefactor::io::usage_error("bench rings: Q, Qi, HQ");
                        }
                    }
                    auto dt = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
                    std::printf("%-3s n=%zu  %8.3f ms/op\n", ring.c_str(), n, dt / reps);
                }
            }
            return 0;
        }
    } catch (const tracefactor::io::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const tracefactor::parse_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

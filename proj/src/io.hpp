#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tracefactor/gaussian.hpp"
#include "tracefactor/matrix.hpp"
#include "tracefactor/modular.hpp"
#include "tracefactor/quaternion.hpp"
#include "tracefactor/rational.hpp"

// JSON documents for matrices and certificates. Certificates are
// human-auditable; verification re-derives every claimed equality from
// the stored source and factors using matrix-core arithmetic only.

namespace tracefactor::io {

using json = nlohmann::ordered_json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "Q" | "Qi" | "HQ" | "Fp:<p>" | "Zm:<m>" | "Hfloat"
struct RingTag {
    enum class Kind { rational, gaussian, quaternion, prime_field, modular, quaternion_float };
    Kind kind;
    std::int64_t modulus = 0;

    static RingTag parse(const std::string& text);
    std::string str() const;
    bool exact_division_ring() const {
        return kind == Kind::rational || kind == Kind::gaussian || kind == Kind::quaternion ||
               kind == Kind::prime_field;
    }
    bool commutative_field() const {
        return kind == Kind::rational || kind == Kind::gaussian || kind == Kind::prime_field;
    }
};

using AnyMatrix = std::variant<Matrix<Rational>, Matrix<Gaussian>, Matrix<QuaternionQ>,
                               Matrix<PrimeField>, Matrix<Modular>, Matrix<QuaternionF>>;

struct MatrixDocument {
    AnyMatrix matrix;
    bool finitary = false;
    std::size_t support = 0;

    RingTag ring() const;
};

MatrixDocument parse_matrix(const json& doc);
json emit_matrix(const AnyMatrix& m, std::optional<std::size_t> finitary_support = std::nullopt);

// factor kinds accepted by the CLI and the certificate documents
// (bounds are data so regressions show up as diffs)
const std::vector<std::pair<std::string, int>>& factor_bounds();

// run a factorization and build its certificate document
json make_certificate(const std::string& kind, const MatrixDocument& input, std::uint64_t seed);

struct VerifyReport {
    bool pass = false;
    std::vector<std::string> checks;    // one line per executed check
    std::vector<std::string> failures;  // empty iff pass
};

VerifyReport verify_certificate(const json& cert);

struct OracleReport {
    bool pass = false;
    std::string summary;
};

// suites: f2-two-traceless | m2f2-commutator-image | m2f3-two-traceless
OracleReport run_oracle(const std::string& suite);

// semisimple presentations: componentwise generalized-commutator
// decomposition of an element of M_{n_1}(D_1) x ... x M_{n_t}(D_t);
// components must be characteristic zero and never 1x1 over a field
json semisimple_decompose(const std::vector<MatrixDocument>& components, std::uint64_t seed);

}  // namespace tracefactor::io

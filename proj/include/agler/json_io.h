#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "agler/decompose.h"
#include "agler/pick.h"
#include "agler/poly.h"
#include "agler/rational_inner.h"
#include "agler/sdpcore.h"
#include "agler/stability.h"

namespace agler::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Structurally valid JSON that does not describe the expected object.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json ToJson(Complex c);
Complex ComplexFromJson(const Json& j);

Json PointToJson(const Point& z);
Point PointFromJson(const Json& j);

/// {"nvars", "degrees", "coeffs": [[re, im], ...]}, row-major with the last
/// variable fastest.
Json ToJson(const Poly& p);
Poly PolyFromJson(const Json& j);

/// {"rows", "cols", "data": [[re, im], ...]} in row-major order.
Json MatrixToJson(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd MatrixFromJson(const Json& j);
HermMatrix HermFromJson(const Json& j);

/// {"m", "p", "profile"} on input; the output adds k1, k2, p_tilde and the
/// numerator. A missing "m" means m = 1 and a missing profile the tight
/// degree of p.
Json ToJson(const RationalInner& phi);
RationalInner PhiFromJson(const Json& j);

Json ToJson(const GramKernel& g);
GramKernel GramFromJson(const Json& j);

Json ToJson(const AglerCertificate& c);
Json ToJson(const AglerPair& pair);
AglerPair PairFromJson(const Json& j);

Json ToJson(const SamplingGrid& g);
Json ToJson(const StabilityCertificate& c);
Json ToJson(const UniquenessReport& r);
Json ToJson(const SupportReport& r);

Json ToJson(const PickData& d);
PickData PickDataFromJson(const Json& j);
Json ToJson(const PickResult& r);

}  // namespace agler::io

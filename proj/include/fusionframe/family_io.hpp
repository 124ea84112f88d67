#ifndef FUSIONFRAME_FAMILY_IO_HPP
#define FUSIONFRAME_FAMILY_IO_HPP

// JSON family and frame-list files.
//
//   { "ambient_dim": n, "field": "complex",
//     "members": [ { "weight": w, "basis": [ [ [re, im], ... ], ... ] } ] }
//
//   { "ambient_dim": n, "field": "complex", "frames": [ [ [ [re, im], ... ], ... ], ... ] }
//
// Bases are read as given and orthonormalized; the file keeps the original
// vectors. The writer emits one canonical layout with %.17g reals so that
// write(read(text)) == text for canonical text.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusionframe/construct.hpp"
#include "fusionframe/frames.hpp"
#include "fusionframe/fusion.hpp"

namespace fusionframe::io {

using nlohmann::json;

/// A family together with the spanning vectors it was read from.
struct FamilyFile {
    WeightedFamily family;
    std::vector<Mat> original_bases;  ///< n × d_i, columns as in the file
};

inline std::string format_real(double x)
{
    if (!std::isfinite(x))
        throw PreconditionError("cannot serialize a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline const json& field(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key))
        throw IoError(where + ": missing \"" + key + "\"");
    return obj.at(key);
}

inline double number(const json& v, const std::string& where)
{
    if (!v.is_number())
        throw IoError(where + ": expected a number");
    return v.get<double>();
}

inline std::size_t read_ambient(const json& doc)
{
    const json& n = field(doc, "ambient_dim", "file");
    if (!n.is_number_integer() || n.get<long long>() < 1)
        throw IoError("file: \"ambient_dim\" must be a positive integer");
    const json& f = field(doc, "field", "file");
    if (!f.is_string() || f.get<std::string>() != "complex")
        throw IoError("file: \"field\" must be \"complex\"");
    return n.get<std::size_t>();
}

inline Vec read_vector(const json& v, std::size_t n, const std::string& where)
{
    if (!v.is_array() || v.size() != n)
        throw IoError(where + ": expected " + std::to_string(n) + " entries");
    Vec out(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const json& z = v[k];
        if (!z.is_array() || z.size() != 2)
            throw IoError(where + ": entries are [re, im] pairs");
        out(static_cast<Eigen::Index>(k)) = Complex(number(z[0], where), number(z[1], where));
    }
    return out;
}

inline Mat read_vectors(const json& list, std::size_t n, const std::string& where)
{
    if (!list.is_array() || list.empty())
        throw IoError(where + ": expected a nonempty list of vectors");
    Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(list.size()));
    for (std::size_t j = 0; j < list.size(); ++j)
        m.col(static_cast<Eigen::Index>(j)) = read_vector(list[j], n, where + " vector " + std::to_string(j));
    return m;
}

inline json parse(std::istream& in)
{
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed JSON: ") + e.what());
    }
}

inline std::ifstream open(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    return in;
}

inline void write_vectors(std::ostream& out, const Mat& m, const char* indent)
{
    out << "[\n";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out << indent << "  [";
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            out << (i ? ", " : "") << '[' << format_real(m(i, j).real()) << ", " << format_real(m(i, j).imag())
                << ']';
        }
        out << ']' << (j + 1 < m.cols() ? "," : "") << '\n';
    }
    out << indent << ']';
}

} // namespace detail

inline FamilyFile read_family(std::istream& in)
{
    const json doc = detail::parse(in);
    const std::size_t n = detail::read_ambient(doc);
    const json& members = detail::field(doc, "members", "file");
    if (!members.is_array() || members.empty())
        throw IoError("file: \"members\" must be a nonempty array");
    std::vector<Member> ms;
    std::vector<Mat> originals;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const std::string where = "member " + std::to_string(i);
        const double w = detail::number(detail::field(members[i], "weight", where), where);
        Mat b = detail::read_vectors(detail::field(members[i], "basis", where), n, where);
        ms.push_back({w, orthonormal_basis(b)});
        originals.push_back(std::move(b));
    }
    return {WeightedFamily(n, std::move(ms)), std::move(originals)};
}

inline FamilyFile read_family_file(const std::string& path)
{
    std::ifstream in = detail::open(path);
    return read_family(in);
}

inline FamilyFile read_family_text(const std::string& text)
{
    std::istringstream in(text);
    return read_family(in);
}

/// Family file with the orthonormal bases as the spanning vectors.
inline FamilyFile as_file(const WeightedFamily& w)
{
    std::vector<Mat> bases;
    for (const auto& m : w.members())
        bases.push_back(m.subspace.basis());
    return {w, std::move(bases)};
}

inline void write_family(std::ostream& out, const FamilyFile& f)
{
    const auto& w = f.family;
    out << "{\n";
    out << "  \"ambient_dim\": " << w.ambient_dim() << ",\n";
    out << "  \"field\": \"complex\",\n";
    out << "  \"members\": [\n";
    for (std::size_t i = 0; i < w.size(); ++i) {
        out << "    {\n";
        out << "      \"weight\": " << format_real(w[i].weight) << ",\n";
        out << "      \"basis\": ";
        detail::write_vectors(out, f.original_bases[i], "      ");
        out << "\n    }" << (i + 1 < w.size() ? "," : "") << '\n';
    }
    out << "  ]\n}\n";
}

inline std::string write_family(const FamilyFile& f)
{
    std::ostringstream out;
    write_family(out, f);
    return out.str();
}

inline std::string write_family(const WeightedFamily& w) { return write_family(as_file(w)); }

/// One local frame per member.
inline std::vector<VectorFrame> read_frames(std::istream& in)
{
    const json doc = detail::parse(in);
    const std::size_t n = detail::read_ambient(doc);
    const json& frames = detail::field(doc, "frames", "file");
    if (!frames.is_array() || frames.empty())
        throw IoError("file: \"frames\" must be a nonempty array");
    std::vector<VectorFrame> out;
    for (std::size_t i = 0; i < frames.size(); ++i)
        out.push_back(VectorFrame::from_columns(detail::read_vectors(frames[i], n, "frame " + std::to_string(i))));
    return out;
}

inline std::vector<VectorFrame> read_frames_file(const std::string& path)
{
    std::ifstream in = detail::open(path);
    return read_frames(in);
}

inline void write_frames(std::ostream& out, std::size_t ambient_dim, const std::vector<VectorFrame>& frames)
{
    out << "{\n  \"ambient_dim\": " << ambient_dim << ",\n  \"field\": \"complex\",\n  \"frames\": [\n";
    for (std::size_t i = 0; i < frames.size(); ++i) {
        out << "    ";
        detail::write_vectors(out, synthesis(frames[i]), "    ");
        out << (i + 1 < frames.size() ? "," : "") << '\n';
    }
    out << "  ]\n}\n";
}

inline json matrix_json(const Mat& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::ordered_json analysis_json(const FusionAnalysis& a)
{
    nlohmann::ordered_json j;
    j["is_bessel"] = a.is_bessel;
    j["is_fusion_frame"] = a.is_fusion_frame;
    j["lower_A"] = a.lower_A;
    j["upper_B"] = a.upper_B;
    j["excess"] = a.excess;
    j["is_tight"] = a.is_tight;
    j["is_parseval"] = a.is_parseval;
    j["is_minimal"] = a.is_minimal;
    j["is_rbs"] = a.is_rbs;
    j["is_obs"] = a.is_obs;
    return j;
}

/// Pieces as orthonormal bases (columns), plus the projection and carrier map.
inline nlohmann::ordered_json dilation_json(const Dilation& d, std::size_t ambient_dim)
{
    nlohmann::ordered_json j;
    j["kind"] = to_string(d.kind);
    j["ambient_dim"] = ambient_dim;
    j["big_dim"] = d.big_dim;
    nlohmann::ordered_json pieces = nlohmann::ordered_json::array();
    for (const auto& p : d.pieces) {
        nlohmann::ordered_json pj;
        pj["dim"] = p.dim();
        pj["basis"] = matrix_json(p.basis().transpose());
        pieces.push_back(std::move(pj));
    }
    j["pieces"] = std::move(pieces);
    j["projection"] = matrix_json(d.projection);
    j["carrier_map"] = matrix_json(d.carrier_map);
    return j;
}

} // namespace fusionframe::io

#endif // FUSIONFRAME_FAMILY_IO_HPP

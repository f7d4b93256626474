// Text layout (one item per line, tokens separated by single spaces):
//
//   dirad-model 1
//   attributes <m>
//   <direction> <name>                      m lines; name runs to end of line
//   midhinge <m doubles>
//   semi_iqr <m doubles>
//   detector nnd|alp
//   spec <p> <m variants>
//   weights <k> <k doubles>
//   weights_l <l> <l doubles>               alp only
//   train <n> <m>, then n lines of m doubles
//   sorted_sums none | sorted_sums <n> <n doubles>        nnd only
//   neighbour_table <n> <k>, then n lines of k doubles    alp only
//   end
//
// Doubles use hexadecimal floating-point text (std::chars_format::hex).

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "dirad/detector.hpp"

namespace dirad {

namespace {

constexpr std::string_view kMagic = "dirad-model";
constexpr int kVersion = 1;

std::string hex(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::hex);
    return std::string(buf.data(), res.ptr);
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::istringstream line(std::string_view expected_key) {
        std::string text;
        if (!std::getline(in_, text)) {
            fail("unexpected end of model, expected '" + std::string(expected_key) + "'");
        }
        ++line_no_;
        std::istringstream ls(text);
        std::string key;
        ls >> key;
        if (key != expected_key) {
            fail("expected '" + std::string(expected_key) + "', found '" + key + "'");
        }
        return ls;
    }

    std::string raw_line() {
        std::string text;
        if (!std::getline(in_, text)) {
            fail("unexpected end of model");
        }
        ++line_no_;
        return text;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("model line " + std::to_string(line_no_) + ": " + msg);
    }

    double number(std::istringstream& ls) const {
        std::string tok;
        if (!(ls >> tok)) {
            fail("missing number");
        }
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v, std::chars_format::hex);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
            fail("bad number '" + tok + "'");
        }
        return v;
    }

    std::size_t count(std::istringstream& ls) const {
        long long v = -1;
        if (!(ls >> v) || v < 0) {
            fail("bad count");
        }
        return static_cast<std::size_t>(v);
    }

    std::vector<double> numbers(std::istringstream& ls, std::size_t n) const {
        std::vector<double> out(n);
        for (auto& v : out) {
            v = number(ls);
        }
        return out;
    }

    Matrix matrix(std::string_view key) {
        auto ls = line(key);
        const auto rows = count(ls);
        const auto cols = count(ls);
        Matrix out(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            std::istringstream row(raw_line());
            for (std::size_t j = 0; j < cols; ++j) {
                out(i, j) = number(row);
            }
        }
        return out;
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

void write_values(std::ostream& out, std::span<const double> values) {
    for (double v : values) {
        out << ' ' << hex(v);
    }
}

void write_matrix(std::ostream& out, std::string_view key, const Matrix& m) {
    out << key << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            out << (j ? " " : "") << hex(r[j]);
        }
        out << '\n';
    }
}

void write_spec(std::ostream& out, const DistanceSpec& spec) {
    out << "spec " << hex(spec.exponent_p);
    for (auto v : spec.variants) {
        out << ' ' << to_string(v);
    }
    out << '\n';
}

}  // namespace

void write_pipeline(std::ostream& out, const Pipeline& p) {
    out << kMagic << ' ' << kVersion << '\n';
    out << "attributes " << p.schema().size() << '\n';
    for (const auto& a : p.schema()) {
        if (a.name.find_first_of("\r\n") != std::string::npos) {
            throw ConfigError("attribute names containing line breaks cannot be serialized");
        }
        out << to_string(a.direction) << ' ' << a.name << '\n';
    }
    out << "midhinge";
    write_values(out, p.scaler().midhinge);
    out << "\nsemi_iqr";
    write_values(out, p.scaler().semi_iqr);
    out << '\n';

    if (const auto* nnd = std::get_if<NndModel>(&p.detector().model())) {
        out << "detector nnd\n";
        write_spec(out, nnd->spec());
        out << "weights " << nnd->weights().size();
        write_values(out, nnd->weights());
        out << '\n';
        write_matrix(out, "train", nnd->train());
        if (nnd->sorted_sums()) {
            out << "sorted_sums " << nnd->sorted_sums()->size();
            write_values(out, *nnd->sorted_sums());
            out << '\n';
        } else {
            out << "sorted_sums none\n";
        }
    } else {
        const auto& alp = std::get<AlpModel>(p.detector().model());
        out << "detector alp\n";
        write_spec(out, alp.spec());
        out << "weights " << alp.weights_k().size();
        write_values(out, alp.weights_k());
        out << "\nweights_l " << alp.weights_l().size();
        write_values(out, alp.weights_l());
        out << '\n';
        write_matrix(out, "train", alp.train());
        write_matrix(out, "neighbour_table", alp.train_nn_dists());
    }
    out << "end\n";
}

Pipeline read_pipeline(std::istream& in) {
    Reader r(in);
    {
        auto ls = r.line(kMagic);
        int version = 0;
        if (!(ls >> version) || version != kVersion) {
            r.fail("unsupported model version");
        }
    }
    auto ls = r.line("attributes");
    const auto m = r.count(ls);
    std::vector<AttributeSpec> schema;
    for (std::size_t j = 0; j < m; ++j) {
        const auto text = r.raw_line();
        const auto space = text.find(' ');
        if (space == std::string::npos) {
            r.fail("expected '<direction> <name>'");
        }
        schema.push_back({text.substr(space + 1), parse_direction(text.substr(0, space))});
    }
    ls = r.line("midhinge");
    ScalingParams scaler;
    scaler.midhinge = r.numbers(ls, m);
    ls = r.line("semi_iqr");
    scaler.semi_iqr = r.numbers(ls, m);

    ls = r.line("detector");
    std::string kind;
    ls >> kind;
    if (kind != "nnd" && kind != "alp") {
        r.fail("unknown detector '" + kind + "'");
    }
    ls = r.line("spec");
    DistanceSpec spec;
    spec.exponent_p = r.number(ls);
    for (std::size_t j = 0; j < m; ++j) {
        std::string tok;
        if (!(ls >> tok)) {
            r.fail("missing variant");
        }
        spec.variants.push_back(parse_variant(tok));
    }
    ls = r.line("weights");
    auto weights = r.numbers(ls, r.count(ls));

    if (kind == "nnd") {
        auto train = r.matrix("train");
        ls = r.line("sorted_sums");
        std::optional<std::vector<double>> sums;
        std::string tok;
        ls >> tok;
        if (tok != "none") {
            std::size_t n = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), n);
            if (res.ec != std::errc{}) {
                r.fail("bad sorted_sums count");
            }
            sums = r.numbers(ls, n);
        }
        r.line("end");
        return Pipeline(std::move(schema), std::move(scaler),
                        Detector(NndModel(std::move(train), std::move(weights), std::move(spec),
                                          std::move(sums))));
    }
    ls = r.line("weights_l");
    auto weights_l = r.numbers(ls, r.count(ls));
    auto train = r.matrix("train");
    auto table = r.matrix("neighbour_table");
    r.line("end");
    return Pipeline(std::move(schema), std::move(scaler),
                    Detector(AlpModel(std::move(train), std::move(weights), std::move(weights_l),
                                      std::move(spec), std::move(table))));
}

std::string serialize(const Pipeline& p) {
    std::ostringstream out;
    write_pipeline(out, p);
    return out.str();
}

Pipeline deserialize(const std::string& text) {
    std::istringstream in(text);
    return read_pipeline(in);
}

}  // namespace dirad

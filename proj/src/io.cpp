#include "vnlab/io.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace vnlab::io {

namespace {

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    struct Term {
        double coefficient = 1.0;
        std::vector<int> indices;
    };

    std::vector<Term> parse()
    {
        std::vector<Term> terms;
        skip_space();
        if (at_end()) fail("empty polynomial");
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
        terms.push_back(term(sign));
        skip_space();
        while (!at_end()) {
            const char op = take();
            if (op != '+' && op != '-') fail(std::string("expected '+' or '-', found '") + op + "'");
            terms.push_back(term(op == '-' ? -1.0 : 1.0));
            skip_space();
        }
        return terms;
    }

private:
    Term term(double sign)
    {
        Term t;
        t.coefficient = sign;
        skip_space();
        if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
            t.coefficient *= number();
            skip_space();
            if (!at_end() && peek() == '*') {
                take();
                skip_space();
            }
        }
        for (;;) {
            skip_space();
            if (at_end() || peek() != 'z') break;
            take();
            const int index = integer();
            int power = 1;
            skip_space();
            if (!at_end() && peek() == '^') {
                take();
                skip_space();
                power = integer();
                if (power < 1) fail("exponent must be positive");
            }
            for (int i = 0; i < power; ++i) t.indices.push_back(index);
            skip_space();
            if (!at_end() && peek() == '*') take();
        }
        if (t.indices.empty()) fail("term without variables at position " + std::to_string(pos_));
        return t;
    }

    double number()
    {
        const std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == 'e' ||
                             peek() == 'E')) {
            const char c = take();
            if ((c == 'e' || c == 'E') && !at_end() && (peek() == '+' || peek() == '-')) take();
        }
        const std::string token(text_.substr(start, pos_ - start));
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            fail("bad coefficient '" + token + "'");
        }
        if (used != token.size()) fail("bad coefficient '" + token + "'");
        return value;
    }

    int integer()
    {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) take();
        if (start == pos_) fail("expected an integer at position " + std::to_string(start));
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return text_[pos_]; }
    char take() { return text_[pos_++]; }
    [[noreturn]] static void fail(const std::string& what) { throw std::invalid_argument("polynomial: " + what); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Json polynomial_to_json(const poly::HomogeneousPolynomial& p)
{
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        terms.push_back(Json{{"indices", m.indices}, {"re", c.real()}, {"im", c.imag()}});
    }
    return Json{{"n", p.n()}, {"k", p.k()}, {"terms", std::move(terms)}};
}

poly::HomogeneousPolynomial polynomial_from_json(const Json& j)
{
    try {
        poly::HomogeneousPolynomial p(j.at("n").get<int>(), j.at("k").get<int>());
        for (const auto& t : j.at("terms")) {
            const double im = t.contains("im") ? t.at("im").get<double>() : 0.0;
            p.add(t.at("indices").get<std::vector<int>>(), cplx{t.at("re").get<double>(), im});
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("polynomial JSON: ") + e.what());
    }
}

poly::HomogeneousPolynomial parse_polynomial(std::string_view text, int n)
{
    const auto terms = ExpressionParser(text).parse();
    const std::size_t k = terms.front().indices.size();
    int max_index = n;
    for (const auto& t : terms) {
        if (t.indices.size() != k) throw std::invalid_argument("polynomial: terms have different degrees");
        for (int j : t.indices) {
            if (j < 1) throw std::invalid_argument("polynomial: variable indices start at 1");
            max_index = std::max(max_index, j);
        }
    }
    poly::HomogeneousPolynomial p(max_index, static_cast<int>(k));
    for (const auto& t : terms) p.add(t.indices, t.coefficient);
    return p;
}

Json system_to_json(const steiner::PartialSteinerSystem& system)
{
    Json blocks = Json::array();
    for (const auto& b : system.blocks) blocks.push_back(b.points);
    return Json{{"n", system.n}, {"k", system.k}, {"t", system.t}, {"blocks", std::move(blocks)}};
}

Json norm_estimate_to_json(const norm::NormEstimate& est)
{
    Json witness = Json::array();
    for (const auto& z : est.witness) witness.push_back(Json::array({z.real(), z.imag()}));
    return Json{{"q", est.q.to_string()},         {"lower", est.lower}, {"lower_method", est.lower_method},
                {"upper", est.upper},             {"upper_method", est.upper_method},
                {"witness", std::move(witness)}};
}

Json rate_to_json(const std::optional<bounds::Rate>& rate)
{
    if (!rate) return nullptr;
    return Json{{"power", rate->power.to_string()}, {"log_power", rate->log_power.to_string()}};
}

Json exponents_to_json(const bounds::ReferenceExponents& e)
{
    return Json{{"mt_lower", rate_to_json(e.mt_lower)},
                {"mt_upper", rate_to_json(e.mt_upper)},
                {"improved_lower", rate_to_json(e.improved_lower)},
                {"c_upper", rate_to_json(e.c_upper)},
                {"d_upper", rate_to_json(e.d_upper)},
                {"d_lower", rate_to_json(e.d_lower)}};
}

std::map<steiner::Block, int> read_signs(std::istream& in)
{
    std::map<steiner::Block, int> signs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<int> values;
        int v = 0;
        while (ls >> v) values.push_back(v);
        if (!ls.eof()) throw std::invalid_argument("sign file line " + std::to_string(line_no) + ": not an integer");
        if (values.empty()) continue;
        if (values.size() < 2) throw std::invalid_argument("sign file line " + std::to_string(line_no) + ": too short");
        const int s = values.back();
        if (s != 1 && s != -1) {
            throw std::invalid_argument("sign file line " + std::to_string(line_no) + ": sign must be +1 or -1");
        }
        values.pop_back();
        std::sort(values.begin(), values.end());
        if (!signs.emplace(steiner::Block{values}, s).second) {
            throw std::invalid_argument("sign file line " + std::to_string(line_no) + ": block listed twice");
        }
    }
    return signs;
}

void write_signs(std::ostream& out, const steiner::PartialSteinerSystem& system, const poly::HomogeneousPolynomial& p)
{
    for (const auto& b : system.blocks) {
        const cplx c = p.coefficient(poly::Monomial{b.points});
        for (int j : b.points) out << j << ' ';
        out << (c.real() < 0 ? -1 : 1) << '\n';
    }
}

poly::HomogeneousPolynomial polynomial_from_signs(const steiner::PartialSteinerSystem& system,
                                                  const std::map<steiner::Block, int>& signs)
{
    poly::HomogeneousPolynomial p(system.n, system.k);
    for (const auto& [block, s] : signs) p.add(block.points, static_cast<double>(s));
    return p;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

steiner::PartialSteinerSystem load_system(const std::filesystem::path& path)
{
    std::istringstream in(read_file(path));
    try {
        return steiner::read_system(in);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("'" + path.string() + "': " + e.what());
    }
}

std::string content_hash(std::string_view bytes)
{
    const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("content_hash: cannot allocate digest context");
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                    EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 && EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("content_hash: SHA-1 failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return hex.str();
}

}  // namespace vnlab::io

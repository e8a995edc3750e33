#include "ladderbus/controlgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ladderbus/error.hpp"

namespace ladderbus
{

bool ControlWord::is_zero() const
{
    return std::all_of(limbs_.begin(), limbs_.end(), [](std::uint64_t l) { return l == 0; });
}

std::string ControlWord::to_hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t n_digits = std::max<std::size_t>(1, (bits() + 3) / 4);
    std::string out(n_digits, '0');
    for (std::size_t d = 0; d < n_digits; ++d)
    {
        const std::size_t bit = 4 * d;
        const auto nibble = bit / 64 < limbs_.size() ? (limbs_[bit / 64] >> (bit % 64)) & 0xFU : 0U;
        out[n_digits - 1 - d] = digits[nibble];
    }
    return out;
}

ControlWord ControlWord::from_hex(std::string_view hex, std::size_t switches)
{
    ControlWord w(switches);
    const std::size_t expected = std::max<std::size_t>(1, (w.bits() + 3) / 4);
    if (hex.size() != expected)
    {
        throw FormatError("memory", "word has " + std::to_string(hex.size()) + " hex digits, expected " +
                                        std::to_string(expected));
    }
    for (std::size_t d = 0; d < hex.size(); ++d)
    {
        const char c = hex[hex.size() - 1 - d];
        std::uint64_t nibble = 0;
        if (c >= '0' && c <= '9')
        {
            nibble = static_cast<std::uint64_t>(c - '0');
        }
        else if (c >= 'a' && c <= 'f')
        {
            nibble = static_cast<std::uint64_t>(c - 'a' + 10);
        }
        else
        {
            throw FormatError("memory", std::string("bad hex digit '") + c + "'");
        }
        const std::size_t bit = 4 * d;
        if (nibble != 0 && bit + std::bit_width(nibble) > w.bits())
        {
            throw FormatError("memory", "word sets bits beyond its width");
        }
        if (bit / 64 < w.limbs_.size())
        {
            w.limbs_[bit / 64] |= nibble << (bit % 64);
        }
    }
    return w;
}

std::size_t Schedule::frame_length() const
{
    std::size_t n = 0;
    for (const auto &e : entries)
    {
        n += e.repeat;
    }
    return n;
}

std::size_t default_controller_count(const LadderTopology &topo)
{
    const auto n = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(topo.columns())) + 0.5));
    return std::max<std::size_t>(1, n);
}

std::vector<ControllerRegion> partition_regions(const LadderTopology &topo, std::size_t n_controllers)
{
    if (n_controllers == 0 || n_controllers > topo.columns())
    {
        throw ConfigError("partition_regions: " + std::to_string(n_controllers) + " controllers for " +
                          std::to_string(topo.columns()) + " columns");
    }
    std::vector<ControllerRegion> regions;
    const std::size_t base = topo.columns() / n_controllers;
    const std::size_t extra = topo.columns() % n_controllers;
    std::size_t column = 0;
    for (std::size_t k = 0; k < n_controllers; ++k)
    {
        const std::size_t width = base + (k < extra ? 1 : 0);
        regions.push_back({k, column, column + width - 1, topo.lanes()});
        column += width;
    }
    return regions;
}

Schedule build_schedule(std::size_t scenario_count, const std::optional<std::vector<std::size_t>> &order)
{
    Schedule s;
    if (order)
    {
        std::vector<std::size_t> sorted = *order;
        std::sort(sorted.begin(), sorted.end());
        bool permutation = sorted.size() == scenario_count;
        for (std::size_t i = 0; permutation && i < sorted.size(); ++i)
        {
            permutation = sorted[i] == i;
        }
        if (!permutation)
        {
            throw ConfigError("build_schedule: frame order is not a permutation of 0.." +
                              std::to_string(scenario_count) + "-1");
        }
        for (std::size_t k : *order)
        {
            s.entries.push_back({k, 1});
        }
        return s;
    }
    for (std::size_t k = 0; k < scenario_count; ++k)
    {
        s.entries.push_back({k, 1});
    }
    return s;
}

std::vector<ControllerProgram> encode_scenarios(const ScenarioSet &s, const LadderTopology &topo,
                                                std::span<const ControllerRegion> regions, const Schedule &schedule)
{
    std::size_t covered = 0;
    for (const auto &r : regions)
    {
        if (r.lanes != topo.lanes() || r.last_column >= topo.columns() || r.first_column != covered)
        {
            throw ConfigError("encode_scenarios: region " + std::to_string(r.id) + " does not match topology");
        }
        covered = r.last_column + 1;
    }
    if (covered != topo.columns() || s.switch_count() != topo.switch_count())
    {
        throw ConfigError("encode_scenarios: regions do not cover the topology");
    }
    for (const auto &e : schedule.entries)
    {
        if (e.scenario >= s.size())
        {
            throw ConfigError("encode_scenarios: schedule references scenario " + std::to_string(e.scenario));
        }
    }
    if (schedule.conditional && schedule.conditional->scenario >= s.size())
    {
        throw ConfigError("encode_scenarios: conditional entry references unknown scenario");
    }

    std::vector<ControllerProgram> programs;
    for (const auto &r : regions)
    {
        ControllerProgram p{r, {}, schedule};
        for (std::size_t k = 0; k < s.size(); ++k)
        {
            ControlWord w(r.switch_count());
            const auto &vec = s.switches(k);
            for (std::size_t i = 0; i < r.switch_count(); ++i)
            {
                w.set(i, vec[r.first_switch() + i]);
            }
            p.memory.push_back(std::move(w));
        }
        programs.push_back(std::move(p));
    }
    return programs;
}

std::vector<std::vector<SwitchState>> decode_programs(const LadderTopology &topo,
                                                      std::span<const ControllerProgram> programs)
{
    if (programs.empty())
    {
        return {};
    }
    const std::size_t scenarios = programs.front().memory.size();
    std::vector<std::vector<SwitchState>> out(scenarios, std::vector<SwitchState>(topo.switch_count()));
    for (const auto &p : programs)
    {
        if (p.memory.size() != scenarios)
        {
            throw ConfigError("decode_programs: controllers store different scenario counts");
        }
        if (p.region.first_switch() + p.region.switch_count() > topo.switch_count())
        {
            throw ConfigError("decode_programs: region exceeds topology");
        }
        for (std::size_t k = 0; k < scenarios; ++k)
        {
            for (std::size_t i = 0; i < p.region.switch_count(); ++i)
            {
                out[k][p.region.first_switch() + i] = p.memory[k].get(i);
            }
        }
    }
    return out;
}

std::size_t control_memory_bits(std::span<const ControllerProgram> programs)
{
    std::size_t bits = 0;
    for (const auto &p : programs)
    {
        bits += p.memory.size() * p.word_bits();
    }
    return bits;
}

std::string write_program(const ControllerProgram &p)
{
    std::ostringstream out;
    out << "ladderbus-ctrl 1\n";
    out << "region " << p.region.id << " columns " << p.region.first_column << ' ' << p.region.last_column
        << " lanes " << p.region.lanes << '\n';
    out << "word_bits " << p.word_bits() << '\n';
    out << "scenarios " << p.memory.size() << '\n';
    out << "memory\n";
    for (const auto &w : p.memory)
    {
        out << w.to_hex() << '\n';
    }
    out << "schedule\n";
    for (const auto &e : p.schedule.entries)
    {
        out << '(' << e.scenario << ", " << e.repeat << ")\n";
    }
    if (p.schedule.conditional)
    {
        out << "cond(" << p.schedule.conditional->flag << ", " << p.schedule.conditional->scenario << ")\n";
    }
    out << "end\n";
    return out.str();
}

namespace
{

class LineReader
{
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    std::string next()
    {
        if (pos_ >= text_.size())
        {
            throw FormatError(where(), "unexpected end of program");
        }
        const auto eol = text_.find('\n', pos_);
        const auto end = eol == std::string_view::npos ? text_.size() : eol;
        std::string line(text_.substr(pos_, end - pos_));
        pos_ = end + 1;
        ++line_no_;
        return line;
    }

    [[nodiscard]] std::string where() const { return "line " + std::to_string(line_no_); }

private:
    std::string_view text_;
    std::size_t pos_{0};
    std::size_t line_no_{0};
};

std::vector<std::size_t> numbers_in(const std::string &line)
{
    std::vector<std::size_t> out;
    std::string digits;
    for (char c : line + ' ')
    {
        if (c >= '0' && c <= '9')
        {
            digits += c;
        }
        else if (!digits.empty())
        {
            out.push_back(std::stoull(digits));
            digits.clear();
        }
    }
    return out;
}

} // namespace

ControllerProgram parse_program(std::string_view text)
{
    LineReader in(text);
    auto expect_prefix = [&](const std::string &line, std::string_view prefix) {
        if (line.rfind(prefix, 0) != 0)
        {
            throw FormatError(in.where(), "expected '" + std::string(prefix) + "'");
        }
    };
    if (in.next() != "ladderbus-ctrl 1")
    {
        throw FormatError(in.where(), "not a ladderbus controller program");
    }
    ControllerProgram p;
    std::string line = in.next();
    expect_prefix(line, "region ");
    auto nums = numbers_in(line);
    if (nums.size() != 4 || nums[2] < nums[1] || nums[3] == 0)
    {
        throw FormatError(in.where(), "bad region descriptor");
    }
    p.region = {nums[0], nums[1], nums[2], nums[3]};
    line = in.next();
    expect_prefix(line, "word_bits ");
    if (numbers_in(line) != std::vector<std::size_t>{p.word_bits()})
    {
        throw FormatError(in.where(), "word width disagrees with region size");
    }
    line = in.next();
    expect_prefix(line, "scenarios ");
    nums = numbers_in(line);
    if (nums.size() != 1)
    {
        throw FormatError(in.where(), "bad scenario count");
    }
    const std::size_t scenarios = nums[0];
    if (in.next() != "memory")
    {
        throw FormatError(in.where(), "expected 'memory'");
    }
    for (std::size_t k = 0; k < scenarios; ++k)
    {
        line = in.next();
        try
        {
            p.memory.push_back(ControlWord::from_hex(line, p.region.switch_count()));
        }
        catch (const FormatError &e)
        {
            throw FormatError(in.where(), e.what());
        }
    }
    if (in.next() != "schedule")
    {
        throw FormatError(in.where(), "expected 'schedule'");
    }
    for (line = in.next(); line != "end"; line = in.next())
    {
        if (line.empty())
        {
            throw FormatError(in.where(), "empty schedule line");
        }
        nums = numbers_in(line);
        if (line.rfind("cond(", 0) == 0 && nums.size() == 2 && !p.schedule.conditional)
        {
            p.schedule.conditional = ConditionalEntry{nums[0], nums[1]};
        }
        else if (line.front() == '(' && nums.size() == 2 && !p.schedule.conditional)
        {
            p.schedule.entries.push_back({nums[0], nums[1]});
        }
        else
        {
            throw FormatError(in.where(), "bad schedule entry '" + line + "'");
        }
        const std::size_t idx = nums[line.front() == '(' ? 0 : 1];
        if (idx >= scenarios)
        {
            throw FormatError(in.where(), "schedule references scenario " + std::to_string(idx));
        }
    }
    return p;
}

} // namespace ladderbus

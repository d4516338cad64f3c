#include "tfem/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace tfem {

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), p);
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : out_(path), path_(path), width_(header.size())
{
    if (!out_)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values)
{
    if (values.size() != width_)
        throw std::runtime_error(path_ + ": row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
}

void CsvWriter::row_with_id(std::size_t id, const std::vector<double>& values)
{
    if (values.size() + 1 != width_)
        throw std::runtime_error(path_ + ": row width mismatch");
    out_ << id;
    for (double v : values)
        out_ << ',' << format_double(v);
    out_ << '\n';
}

void CsvWriter::close()
{
    out_.close();
    if (out_.fail())
        throw std::runtime_error("write to '" + path_ + "' failed");
}

} // namespace tfem

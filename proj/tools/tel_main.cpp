#include <chrono>
#include <fstream>
#include <iostream>

#include "tel/report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bool with_timing = false;
  std::string format = "json";
  std::string out_path;
  // peel the output flags; everything else goes to the dispatcher
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--with-timing") {
      with_timing = true;
    } else if (args[i] == "--format" && i + 1 < args.size()) {
      format = args[++i];
    } else if (args[i] == "--out" && i + 1 < args.size()) {
      out_path = args[++i];
    } else {
      rest.push_back(args[i]);
    }
  }

  auto t0 = std::chrono::steady_clock::now();
  tel::RunReport rep = tel::dispatch(rest);
  rep.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();

  std::string text;
  try {
    text = tel::serialize_report(rep, format, with_timing);
  } catch (const std::exception& e) {
    std::cerr << "serialization error: " << e.what() << "\n";
    return 2;
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    // no partial writes on error: buffer, then write once
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "cannot open " << out_path << "\n";
      return 2;
    }
    out << text;
  }
  if (rep.exit_code == 2) std::cerr << "status: " << rep.status << "\n";
  return rep.exit_code;
}

#include <cstdio>

int main() {
  std::fprintf(stderr, "mutgen: command line not wired up yet\n");
  return 2;
}

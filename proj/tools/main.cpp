#include <cstdio>
int main() { std::printf("helmbem cli stub\n"); return 0; }

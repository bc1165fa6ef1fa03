#include <cstdio>
int main() { std::puts("axiscat"); return 0; }

#include <iostream>

int main() {
  std::cout << "grbfnn placeholder\n";
  return 0;
}

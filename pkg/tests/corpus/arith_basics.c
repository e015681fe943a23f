int add(int a, int b) { return a + b; }
int sub(int a, int b) { return a - b; }
int mul(int a, int b) { return a * b; }

int combine(int x, int y, int z)
{
    return add(x, mul(y, z)) - sub(z, x);
}

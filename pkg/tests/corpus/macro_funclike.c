#define SQUARE(x) x * x
#define MAX(a, b) a > b ? a : b

int biggest_square(int p, int q)
{
    return MAX(SQUARE(p), SQUARE(q));
}

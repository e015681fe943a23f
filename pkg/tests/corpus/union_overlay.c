union overlay {
    int whole;
    char bytes[4];
};

union overlay storage;

struct tagged {
    int kind;
    union overlay data;
};

package broken;

public class Bad {
    private int ok;

    public int fine() {
        return ok;
    }

    public void mangled( {
        ok = 1;
    }

    /* unterminated comment

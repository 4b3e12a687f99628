/** Typed client for the review service JSON routes. */
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
        this.name = "ApiError";
    }
}
export class ReviewApi {
    fetchImpl;
    base;
    constructor(fetchImpl, base = "") {
        this.fetchImpl = fetchImpl;
        this.base = base;
    }
    async pending() {
        const response = await this.fetchImpl(`${this.base}/api/pending`);
        if (!response.ok) {
            throw new ApiError(response.status, `pending queue unavailable (${response.status})`);
        }
        return (await response.json());
    }
    /**
     * Post one verdict. 204 resolves to "accepted", 409 to "conflict" (someone
     * already decided the pair, the queue must refresh); anything else throws.
     */
    async submitVerdict(item, verdict) {
        const response = await this.fetchImpl(`${this.base}/api/verdict`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ id_a: item.id_a, id_b: item.id_b, verdict }),
        });
        if (response.status === 204)
            return "accepted";
        if (response.status === 409)
            return "conflict";
        throw new ApiError(response.status, `verdict rejected (${response.status})`);
    }
    async healthy() {
        try {
            const response = await this.fetchImpl(`${this.base}/api/health`);
            return response.ok;
        }
        catch {
            return false;
        }
    }
}
